#pragma once

// The relay chain as a message hub. It verifies every transfer at ingress
// against the origin's public board and never holds a plaintext balance.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ztc/ledger/chain.hpp"
#include "ztc/relay/envelope.hpp"

namespace ztc::relay {

using ledger::Address;
using zkp::InvalidReason;
using zkp::ValidityResult;

struct ReceiverPolicy {
  bool allow_all = true;
  std::set<Address> allowlist;

  bool allows(const Address& a) const { return allow_all || allowlist.contains(a); }
};

class DuplicateChain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outbound {
  ChainId to;
  Envelope env;
};

enum class IngressKind { Transfer, ReceiptForwarded, UnknownReceipt, Undeliverable };

/// Everything the relay decided about one envelope.
struct IngressOutcome {
  IngressKind kind = IngressKind::Undeliverable;
  std::optional<TransferPayload> transfer;
  std::optional<TxHash> tx_hash;
  /// verify_tx_proof output, when the check was reached.
  std::optional<ValidityResult> proof_check;
  /// Commitment and key the proof was checked against.
  std::optional<crypto::Commitment> commitment;
  std::optional<crypto::Element> sender_pk;
  ValidityResult result = ValidityResult::valid();
  std::optional<RelayReceipt> receipt;
  std::vector<Outbound> out;
};

class RelayHub {
 public:
  RelayHub(const crypto::Group& group, crypto::Keypair operator_keys, std::uint64_t seed);

  /// `board` is the chain's public data; it must outlive the hub.
  void register_chain(const ChainId& id, std::string net_address, ReceiverPolicy policy,
                      const ledger::PublicBoard* board);
  bool routable(const ChainId& id) const { return routes_.contains(id); }
  const std::string& net_address(const ChainId& id) const;

  /// `from` is the chain the envelope physically arrived from, if known.
  IngressOutcome ingress(const Envelope& env, const std::optional<ChainId>& from);

  const crypto::Element& public_key() const { return keys_.pk; }
  std::size_t pending_count() const { return pending_.size(); }
  std::size_t seen_count() const { return seen_.size(); }

 private:
  struct Route {
    std::string net_address;
    ReceiverPolicy policy;
    const ledger::PublicBoard* board;
  };
  struct Pending {
    ChainId origin;
    ChainId dest;
  };

  IngressOutcome transfer_ingress(const Envelope& env, const std::optional<ChainId>& from);
  IngressOutcome receipt_ingress(const Envelope& env, const std::optional<ChainId>& from);
  RelayReceipt sign_receipt(const TxHash& h, const ValidityResult& r);
  void reject(IngressOutcome& o, const ChainId& origin, InvalidReason reason);

  const crypto::Group* group_;
  crypto::Keypair keys_;
  netsim::RngStream sign_rng_;
  std::map<ChainId, Route> routes_;
  std::set<std::tuple<ChainId, Address, std::uint64_t>> seen_;
  std::map<TxHash, Pending> pending_;
};

}  // namespace ztc::relay
