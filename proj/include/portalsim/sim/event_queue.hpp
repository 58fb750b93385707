// Copyright 2026 The portalsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace portalsim::sim {

using Tick = std::uint64_t;

// Discrete-event queue ordered by (due tick, insertion sequence).
class EventQueue {
 public:
  using Id = std::uint64_t;

  // Events due before now() run at now().
  Id schedule(Tick due, std::string label, std::function<void()> fn) {
    if (due < now_) due = now_;
    const Id id = next_id_++;
    entries_.emplace(Key{due, id}, Entry{std::move(label), std::move(fn)});
    due_of_.emplace(id, due);
    return id;
  }

  bool cancel(Id id) {
    auto it = due_of_.find(id);
    if (it == due_of_.end()) return false;
    entries_.erase(Key{it->second, id});
    due_of_.erase(it);
    return true;
  }

  bool pending(Id id) const { return due_of_.count(id) != 0; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  Tick now() const { return now_; }

  std::optional<Tick> next_due() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.begin()->first.first;
  }

  // Runs the earliest event. Returns false when empty.
  bool step() {
    if (entries_.empty()) return false;
    auto it = entries_.begin();
    now_ = it->first.first;
    auto fn = std::move(it->second.fn);
    due_of_.erase(it->first.second);
    entries_.erase(it);
    fn();
    return true;
  }

  // (due, label) of pending events in pop order.
  std::vector<std::pair<Tick, std::string>> summary(std::size_t max) const {
    std::vector<std::pair<Tick, std::string>> out;
    for (const auto& [key, entry] : entries_) {
      if (out.size() == max) break;
      out.emplace_back(key.first, entry.label);
    }
    return out;
  }

  // Ids of pending events, in pop order.
  std::vector<Id> ids() const {
    std::vector<Id> out;
    for (const auto& [key, entry] : entries_) out.push_back(key.second);
    return out;
  }

  void clear() {
    entries_.clear();
    due_of_.clear();
  }

 private:
  using Key = std::pair<Tick, Id>;
  struct Entry {
    std::string label;
    std::function<void()> fn;
  };

  std::map<Key, Entry> entries_;
  std::map<Id, Tick> due_of_;
  Id next_id_ = 0;
  Tick now_ = 0;
};

}  // namespace portalsim::sim
