#include "ztc/netsim/network.hpp"

namespace ztc::netsim {

namespace {

bool same_pair(const NodeId& a, const NodeId& b, const NodeId& x, const NodeId& y) {
  return (a == x && b == y) || (a == y && b == x);
}

}  // namespace

Network::Link Network::make_link(const NodeId& from, const NodeId& to,
                                 const LinkConfig& cfg) const {
  if (cfg.drop_den == 0 || cfg.drop_num > cfg.drop_den) {
    throw std::invalid_argument("drop probability must be num/den with 0 <= num <= den, den > 0");
  }
  const std::string base = "link/" + from + "->" + to;
  return Link{cfg, RngStream::fork(seed_, base + "/drop"), RngStream::fork(seed_, base + "/jitter")};
}

void Network::add_link(const NodeId& from, const NodeId& to, const LinkConfig& cfg) {
  links_.insert_or_assign({from, to}, make_link(from, to, cfg));
  if (!links_.contains({to, from})) {
    links_.emplace(std::make_pair(to, from), make_link(to, from, cfg));
  }
}

bool Network::has_link(const NodeId& from, const NodeId& to) const {
  return links_.contains({from, to});
}

const LinkConfig& Network::link(const NodeId& from, const NodeId& to) const {
  auto it = links_.find({from, to});
  if (it == links_.end()) {
    throw UnknownLink("no link " + from + " -> " + to);
  }
  return it->second.cfg;
}

void Network::partition(const NodeId& a, const NodeId& b, std::uint64_t from_tick,
                        std::uint64_t to_tick) {
  cuts_.push_back(Cut{a, b, from_tick, to_tick});
}

void Network::heal(const NodeId& a, const NodeId& b, std::uint64_t tick) {
  for (auto& c : cuts_) {
    if (same_pair(c.a, c.b, a, b) && c.from <= tick && c.to > tick) {
      c.to = tick;
    }
  }
}

bool Network::partitioned(const NodeId& a, const NodeId& b, std::uint64_t tick) const {
  for (const auto& c : cuts_) {
    if (same_pair(c.a, c.b, a, b) && c.from <= tick && tick < c.to) {
      return true;
    }
  }
  return false;
}

SendOutcome Network::send(const NodeId& from, const NodeId& to, Bytes payload, bool reliable) {
  auto it = links_.find({from, to});
  if (it == links_.end()) {
    throw UnknownLink("no link " + from + " -> " + to);
  }
  Link& l = it->second;
  SendOutcome out;

  // Both draws happen for every send so a link's streams advance identically
  // whatever the outcome.
  const bool random_drop = l.drop_rng.uniform_inclusive(l.cfg.drop_den - 1) < l.cfg.drop_num;
  const std::uint64_t extra = l.cfg.jitter == 0 ? 0 : l.jitter_rng.uniform_inclusive(l.cfg.jitter);

  if (!reliable) {
    if (partitioned(from, to, now_)) {
      out.drop = DropCause::Partition;
    } else if (random_drop) {
      out.drop = DropCause::Random;
    }
  }
  if (out.dropped()) {
    ++dropped_;
    return out;
  }
  out.deliver_tick = now_ + l.cfg.base_latency + extra;
  out.seq = next_seq_++;
  queue_.push(Delivery{out.deliver_tick, out.seq, from, to, std::move(payload)});
  ++scheduled_;
  return out;
}

std::vector<Delivery> Network::pop_due() {
  std::vector<Delivery> out;
  while (!queue_.empty() && queue_.top().tick <= now_) {
    out.push_back(queue_.top());
    queue_.pop();
    ++delivered_;
  }
  return out;
}

std::optional<std::uint64_t> Network::next_due_tick() const {
  if (queue_.empty()) {
    return std::nullopt;
  }
  return queue_.top().tick;
}

void Network::advance_to(std::uint64_t tick) {
  if (tick < now_) {
    throw std::logic_error("network time cannot go backwards");
  }
  now_ = tick;
}

std::vector<Delivery> Network::step() {
  ++now_;
  return pop_due();
}

}  // namespace ztc::netsim
