// Copyright 2026 The lossbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "lossbound/recsys.hpp"

namespace lossbound {

namespace {

struct RawRow {
  std::string user;
  std::string item;
  std::int64_t timestamp;
};

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line,
                                    std::string_view sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + sep.size();
  }
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw IoError("line " + std::to_string(line_no) + ": " + why);
}

std::int64_t parse_timestamp(std::string_view field, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    malformed(line_no, "timestamp '" + std::string(field) +
                           "' is not an integer");
  }
  return value;
}

}  // namespace

std::optional<InteractionFormat> parse_interaction_format(
    std::string_view name) {
  if (name == "csv") return InteractionFormat::kCsv;
  if (name == "movielens" || name == "movielens-dat" || name == "dat") {
    return InteractionFormat::kMovieLens;
  }
  return std::nullopt;
}

InteractionDataset make_dataset(std::size_t num_users, std::size_t num_items,
                                std::vector<Interaction> events) {
  InteractionDataset dataset;
  dataset.user_ids.reserve(num_users);
  dataset.item_ids.reserve(num_items);
  for (std::size_t u = 0; u < num_users; ++u) {
    dataset.user_ids.push_back(std::to_string(u));
  }
  for (std::size_t i = 0; i < num_items; ++i) {
    dataset.item_ids.push_back(std::to_string(i));
  }
  for (const auto& e : events) {
    if (e.user >= num_users || e.item >= num_items) {
      throw InvalidInput("event references an out-of-range user or item");
    }
  }

  std::vector<std::vector<std::pair<std::int64_t, ItemId>>> timed(num_users);
  for (const auto& e : events) timed[e.user].emplace_back(e.timestamp, e.item);
  dataset.sequences.resize(num_users);
  for (std::size_t u = 0; u < num_users; ++u) {
    std::stable_sort(timed[u].begin(), timed[u].end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [ts, item] : timed[u]) dataset.sequences[u].push_back(item);
  }
  dataset.events = std::move(events);
  return dataset;
}

InteractionDataset parse_interactions(std::istream& in,
                                      InteractionFormat format) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = format != InteractionFormat::kCsv;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;

    if (!header_seen) {
      const auto cols = split(view, ",");
      if (cols.size() != 3 || cols[0] != "user_id" || cols[1] != "item_id" ||
          cols[2] != "timestamp") {
        malformed(line_no, "expected header 'user_id,item_id,timestamp'");
      }
      header_seen = true;
      continue;
    }

    const auto fields = format == InteractionFormat::kCsv ? split(view, ",")
                                                          : split(view, "::");
    const std::size_t expected = format == InteractionFormat::kCsv ? 3 : 4;
    if (fields.size() != expected) {
      malformed(line_no, "expected " + std::to_string(expected) +
                             " fields, found " +
                             std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      malformed(line_no, "empty user or item id");
    }
    rows.push_back(RawRow{std::string(fields[0]), std::string(fields[1]),
                          parse_timestamp(fields.back(), line_no)});
  }

  std::unordered_map<std::string, std::size_t> per_user;
  for (const auto& r : rows) ++per_user[r.user];

  InteractionDataset dataset;
  for (const auto& [user, count] : per_user) {
    if (count < kMinEventsPerUser) ++dataset.dropped_users;
  }

  std::unordered_map<std::string, std::uint32_t> user_index;
  std::unordered_map<std::string, ItemId> item_index;
  std::vector<Interaction> events;
  for (const auto& r : rows) {
    if (per_user[r.user] < kMinEventsPerUser) continue;
    auto [uit, new_user] = user_index.try_emplace(
        r.user, static_cast<std::uint32_t>(user_index.size()));
    if (new_user) dataset.user_ids.push_back(r.user);
    auto [iit, new_item] =
        item_index.try_emplace(r.item, static_cast<ItemId>(item_index.size()));
    if (new_item) dataset.item_ids.push_back(r.item);
    events.push_back(Interaction{uit->second, iit->second, r.timestamp});
  }
  if (events.empty()) {
    throw IoError("no users with at least " +
                  std::to_string(kMinEventsPerUser) +
                  " interactions in input");
  }

  InteractionDataset built = make_dataset(dataset.user_ids.size(),
                                          dataset.item_ids.size(),
                                          std::move(events));
  built.user_ids = std::move(dataset.user_ids);
  built.item_ids = std::move(dataset.item_ids);
  built.dropped_users = dataset.dropped_users;
  return built;
}

InteractionDataset load_interactions(const std::filesystem::path& path,
                                     InteractionFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  try {
    return parse_interactions(in, format);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_interactions_csv(std::ostream& out,
                            const InteractionDataset& dataset) {
  out << "user_id,item_id,timestamp\n";
  for (const auto& e : dataset.events) {
    out << dataset.user_ids[e.user] << ',' << dataset.item_ids[e.item] << ','
        << e.timestamp << '\n';
  }
}

void write_id_mapping(std::ostream& out, const InteractionDataset& dataset) {
  out << "kind,index,original_id\n";
  for (std::size_t u = 0; u < dataset.user_ids.size(); ++u) {
    out << "user," << u << ',' << dataset.user_ids[u] << '\n';
  }
  for (std::size_t i = 0; i < dataset.item_ids.size(); ++i) {
    out << "item," << i << ',' << dataset.item_ids[i] << '\n';
  }
}

InteractionDataset make_block_dataset(const BlockDatasetSpec& spec,
                                      std::uint64_t seed) {
  if (spec.blocks == 0 || spec.users == 0 || spec.items < spec.blocks) {
    throw InvalidInput("block dataset needs users, blocks >= 1, items >= blocks");
  }
  const std::size_t block_size = spec.items / spec.blocks;
  if (spec.events_per_user < kMinEventsPerUser ||
      spec.events_per_user > block_size) {
    throw InvalidInput("events_per_user must lie in [3, items / blocks]");
  }

  Rng rng = make_stream(seed, 0x424c4f43u);
  SubsetSampler sampler(block_size);
  std::vector<std::size_t> picked;
  std::vector<Interaction> events;
  events.reserve(spec.users * spec.events_per_user);
  for (std::size_t u = 0; u < spec.users; ++u) {
    const std::size_t block = u % spec.blocks;
    sampler.draw(spec.events_per_user, rng, picked);
    for (std::size_t t = 0; t < picked.size(); ++t) {
      events.push_back(Interaction{static_cast<std::uint32_t>(u),
                                   static_cast<ItemId>(block * block_size + picked[t]),
                                   static_cast<std::int64_t>(t)});
    }
  }
  return make_dataset(spec.users, spec.items, std::move(events));
}

SplitDataset split_leave_last(const InteractionDataset& dataset) {
  SplitDataset split;
  split.num_items = dataset.num_items();
  split.users.reserve(dataset.num_users());
  for (std::size_t u = 0; u < dataset.sequences.size(); ++u) {
    const auto& seq = dataset.sequences[u];
    if (seq.size() < kMinEventsPerUser) {
      const std::string name =
          u < dataset.user_ids.size() ? dataset.user_ids[u] : std::to_string(u);
      throw InvalidInput("user '" + name + "' has " +
                         std::to_string(seq.size()) +
                         " interactions; leave-last-out needs at least 3");
    }
    UserSplit user;
    user.train.assign(seq.begin(), seq.end() - 2);
    user.validation = seq[seq.size() - 2];
    user.test = seq.back();
    user.interacted = seq;
    std::sort(user.interacted.begin(), user.interacted.end());
    user.interacted.erase(
        std::unique(user.interacted.begin(), user.interacted.end()),
        user.interacted.end());
    split.users.push_back(std::move(user));
  }
  return split;
}

}  // namespace lossbound
