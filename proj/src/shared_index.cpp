#include "limecep/shared_index.hpp"

namespace limecep {

InsertOutcome OrderedEventStore::insert(const Event& e) {
    return events_.insert(e).second ? InsertOutcome::Inserted : InsertOutcome::Duplicate;
}

bool OrderedEventStore::remove(const Event& e) { return events_.erase(e) > 0; }

bool OrderedEventStore::contains(const EventKey& key) const {
    Event probe;
    probe.gen_ms = key.gen_ms;
    probe.type = key.type;
    probe.id = key.id;
    return events_.count(probe) > 0;
}

std::optional<Event> OrderedEventStore::last() const {
    if (events_.empty()) return std::nullopt;
    return *events_.rbegin();
}

std::vector<Event> OrderedEventStore::range(Timestamp from, Timestamp to) const {
    std::vector<Event> out;
    Event probe;
    probe.gen_ms = from; // empty type/id sorts before any real key at this gen
    for (auto it = events_.lower_bound(probe); it != events_.end() && it->gen_ms <= to; ++it)
        out.push_back(*it);
    return out;
}

std::vector<Event> OrderedEventStore::all() const {
    return std::vector<Event>(events_.begin(), events_.end());
}

std::size_t OrderedEventStore::erase_older_than(Timestamp cutoff_gen_ms) {
    std::size_t removed = 0;
    for (auto it = events_.begin(); it != events_.end() && it->gen_ms < cutoff_gen_ms;) {
        it = events_.erase(it);
        ++removed;
    }
    return removed;
}

InsertOutcome SharedIndex::insert(const Event& e) { return stores_[e.type].insert(e); }

bool SharedIndex::remove(const Event& e) {
    auto it = stores_.find(e.type);
    return it != stores_.end() && it->second.remove(e);
}

std::vector<Event> SharedIndex::range(const std::string& type, Timestamp from, Timestamp to) const {
    auto it = stores_.find(type);
    if (it == stores_.end()) return {};
    return it->second.range(from, to);
}

std::optional<Event> SharedIndex::last_of(const std::string& type) const {
    auto it = stores_.find(type);
    if (it == stores_.end()) return std::nullopt;
    return it->second.last();
}

std::size_t SharedIndex::evict(Timestamp now) {
    if (retention_ms_ <= 0) return 0;
    std::size_t removed = 0;
    for (auto& [type, store] : stores_) removed += store.erase_older_than(now - retention_ms_);
    return removed;
}

const OrderedEventStore* SharedIndex::store(const std::string& type) const {
    auto it = stores_.find(type);
    return it == stores_.end() ? nullptr : &it->second;
}

std::size_t SharedIndex::total_size() const {
    std::size_t n = 0;
    for (const auto& [type, store] : stores_) n += store.size();
    return n;
}

}  // namespace limecep
