#pragma once

// Discrete-event message transport between named nodes ("relay" and chain
// names). Time is an integer tick; the queue pops in (tick, seq) order.

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "ztc/common/bytes.hpp"
#include "ztc/netsim/rng.hpp"

namespace ztc::netsim {

using NodeId = std::string;

struct LinkConfig {
  std::uint64_t base_latency = 0;
  std::uint64_t jitter = 0;  // uniform extra delay in [0, jitter]
  std::uint64_t drop_num = 0;
  std::uint64_t drop_den = 1;

  std::uint64_t worst_case_latency() const { return base_latency + jitter; }
};

class UnknownLink : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Delivery {
  std::uint64_t tick = 0;
  std::uint64_t seq = 0;
  NodeId from;
  NodeId to;
  Bytes payload;
};

enum class DropCause { None, Random, Partition };

struct SendOutcome {
  DropCause drop = DropCause::None;
  std::uint64_t deliver_tick = 0;
  std::uint64_t seq = 0;

  bool dropped() const { return drop != DropCause::None; }
};

class Network {
 public:
  explicit Network(std::uint64_t seed) : seed_(seed) {}

  /// Adds from->to, and to->from with the same config unless that direction
  /// was configured explicitly before.
  void add_link(const NodeId& from, const NodeId& to, const LinkConfig& cfg);
  bool has_link(const NodeId& from, const NodeId& to) const;
  const LinkConfig& link(const NodeId& from, const NodeId& to) const;

  /// Cuts both directions between a and b for ticks in [from_tick, to_tick).
  void partition(const NodeId& a, const NodeId& b, std::uint64_t from_tick,
                 std::uint64_t to_tick = UINT64_MAX);
  /// Ends every open partition between a and b at `tick`.
  void heal(const NodeId& a, const NodeId& b, std::uint64_t tick);
  bool partitioned(const NodeId& a, const NodeId& b, std::uint64_t tick) const;

  /// Schedules a message at now + base + jitter draw, or drops it. Reliable
  /// messages are never dropped (receipts use this).
  SendOutcome send(const NodeId& from, const NodeId& to, Bytes payload, bool reliable = false);

  /// Pops every message due at or before the current tick.
  std::vector<Delivery> pop_due();
  std::optional<std::uint64_t> next_due_tick() const;

  std::uint64_t now() const { return now_; }
  void advance_to(std::uint64_t tick);
  /// Advances one tick and returns what became due.
  std::vector<Delivery> step();

  std::size_t in_flight() const { return queue_.size(); }
  std::uint64_t scheduled() const { return scheduled_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  struct Link {
    LinkConfig cfg;
    RngStream drop_rng;
    RngStream jitter_rng;
  };
  struct Cut {
    NodeId a;
    NodeId b;
    std::uint64_t from;
    std::uint64_t to;
  };
  struct Later {
    bool operator()(const Delivery& x, const Delivery& y) const {
      return x.tick != y.tick ? x.tick > y.tick : x.seq > y.seq;
    }
  };

  Link make_link(const NodeId& from, const NodeId& to, const LinkConfig& cfg) const;

  std::uint64_t seed_;
  std::uint64_t now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t scheduled_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::map<std::pair<NodeId, NodeId>, Link> links_;
  std::vector<Cut> cuts_;
  std::priority_queue<Delivery, std::vector<Delivery>, Later> queue_;
};

}  // namespace ztc::netsim
