#pragma once

// Lock-and-mint / burn-and-unlock, built on the ordinary escrowed transfer:
// a bridge op is a transfer whose envelope carries a BridgeOp.

#include <string>
#include <vector>

#include "ztc/bridge/book.hpp"
#include "ztc/ledger/chain.hpp"
#include "ztc/relay/envelope.hpp"

namespace ztc::bridge {

struct Submission {
  relay::TransferPayload payload;
  relay::Envelope env;
};

/// Escrows `amount` of a home asset; locked grows when the Valid receipt
/// comes back, the remote mints on delivery.
Submission lock_and_mint(ledger::ChainState& home, const crypto::Keypair& from,
                         const AssetId& asset, std::uint64_t amount, std::uint64_t fee,
                         const ledger::Address& to_remote_account, const ChainId& remote_chain,
                         std::uint64_t tick, netsim::RngStream& rng);

/// Escrows wrapped units on the remote chain; the home chain releases
/// locked units on delivery and wrapped_supply shrinks on the Valid receipt.
Submission burn_and_unlock(ledger::ChainState& remote, const crypto::Keypair& from,
                           const AssetId& underlying, std::uint64_t amount, std::uint64_t fee,
                           const ledger::Address& to_home_account, const ChainId& home_chain,
                           std::uint64_t tick, netsim::RngStream& rng);

/// locked (home) == wrapped_supply (remote) for every pair any chain knows.
/// Returns one message per violated pair.
std::vector<std::string> invariant_violations(const std::vector<const ledger::ChainState*>& chains);

}  // namespace ztc::bridge
