#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "ztc/ledger/transaction.hpp"

namespace ztc::bridge {

using ledger::AssetId;
using ledger::ChainId;

/// Routing data carried next to a bridge transfer.
///   Lock: tx.asset is `underlying`, origin = home, dest = remote.
///   Burn: tx.asset is the wrapped id, origin = remote, dest = home.
struct BridgeOp {
  enum class Kind : std::uint8_t { Lock = 1, Burn = 2 };

  Kind kind = Kind::Lock;
  AssetId underlying;
  ChainId home;
  ChainId remote;

  bool operator==(const BridgeOp&) const = default;
};

Bytes encode_bridge_op(const BridgeOp& op);
BridgeOp decode_bridge_op(ByteView bytes);

/// True if the op's ids agree with the transaction it rides on.
bool consistent(const BridgeOp& op, const ledger::Transaction& tx);

/// Per-chain bridge accounting, keyed by (underlying asset, remote chain).
/// `locked` is kept by the home chain, `wrapped_supply` by the remote chain.
struct BridgeBook {
  using Key = std::pair<AssetId, ChainId>;

  std::map<Key, std::uint64_t> locked;
  std::map<Key, std::uint64_t> wrapped_supply;

  std::uint64_t locked_for(const AssetId& a, const ChainId& remote) const {
    auto it = locked.find({a, remote});
    return it == locked.end() ? 0 : it->second;
  }
  std::uint64_t wrapped_for(const AssetId& a, const ChainId& remote) const {
    auto it = wrapped_supply.find({a, remote});
    return it == wrapped_supply.end() ? 0 : it->second;
  }
};

}  // namespace ztc::bridge
