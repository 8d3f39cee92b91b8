#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "limecep/event.hpp"

namespace limecep {

enum class InsertOutcome { Inserted, Duplicate };

// Ordered, deduplicating store for a single event type. Events are kept in the
// total order (gen, type, id); re-inserting an identity key is a no-op.
class OrderedEventStore {
  public:
    InsertOutcome insert(const Event& e);
    bool remove(const Event& e);
    bool contains(const EventKey& key) const;
    std::optional<Event> last() const;
    // All events with from <= gen_ms <= to, ascending.
    std::vector<Event> range(Timestamp from, Timestamp to) const;
    std::vector<Event> all() const;
    std::size_t erase_older_than(Timestamp cutoff_gen_ms);
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

  private:
    std::set<Event, EventOrderLess> events_;
};

// One ordered store per event type, shared by every pattern manager so that
// overlapping pattern alphabets store each event exactly once.
class SharedIndex {
  public:
    explicit SharedIndex(Timestamp retention_ms = 0) : retention_ms_(retention_ms) {}

    InsertOutcome insert(const Event& e);
    bool remove(const Event& e);
    // Inclusive range query; unknown types yield an empty list.
    std::vector<Event> range(const std::string& type, Timestamp from, Timestamp to) const;
    std::optional<Event> last_of(const std::string& type) const;
    // Drops events generated before now - retention. Returns the count removed.
    std::size_t evict(Timestamp now);

    const OrderedEventStore* store(const std::string& type) const;
    std::size_t total_size() const;
    Timestamp retention_ms() const { return retention_ms_; }
    void set_retention_ms(Timestamp retention_ms) { retention_ms_ = retention_ms; }

  private:
    std::map<std::string, OrderedEventStore> stores_;
    Timestamp retention_ms_;
};

}  // namespace limecep
