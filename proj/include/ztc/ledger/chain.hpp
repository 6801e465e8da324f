#pragma once

// One parachain: accounts, asset registry, escrowed outbound transfers and
// the public board (keys and balance commitments) the relay verifies against.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "ztc/bridge/book.hpp"
#include "ztc/crypto/schnorr.hpp"
#include "ztc/ledger/transaction.hpp"
#include "ztc/zkp/tx_proof.hpp"

namespace ztc::ledger {

using crypto::Commitment;
using crypto::Element;
using crypto::Group;
using crypto::Keypair;
using crypto::Scalar;
using zkp::InvalidReason;
using zkp::TxValidityProof;
using zkp::ValidityResult;

inline constexpr std::uint64_t kDefaultEscrowExpiry = 1000;

struct AssetSpec {
  AssetId canonical_id;
  std::string name;
  std::string symbol;
  std::uint32_t decimals = 0;
  std::uint64_t total_supply = 0;
  ChainId home_chain;
  /// Set for wrapped representations minted by the bridge.
  std::optional<AssetId> wraps;

  bool operator==(const AssetSpec&) const = default;
};

struct AccountState {
  std::map<AssetId, std::uint64_t> balances;
  std::uint64_t nonce = 0;
  bool frozen = false;
  std::string label;

  std::uint64_t balance(const AssetId& a) const {
    auto it = balances.find(a);
    return it == balances.end() ? 0 : it->second;
  }
};

/// Data a chain exposes to everyone: registered keys and the balance
/// commitment published for each (sender, asset, nonce).
class PublicBoard {
 public:
  void register_key(const Address& a, const Element& pk) { keys_.insert_or_assign(a, pk); }
  std::optional<Element> key(const Address& a) const;

  void publish(const Address& a, const AssetId& asset, std::uint64_t nonce, const Commitment& c);
  std::optional<Commitment> commitment(const Address& a, const AssetId& asset,
                                       std::uint64_t nonce) const;

  const std::map<Address, Element>& keys() const { return keys_; }
  const std::map<std::tuple<Address, AssetId, std::uint64_t>, Commitment>& commitments() const {
    return commitments_;
  }

 private:
  std::map<Address, Element> keys_;
  std::map<std::tuple<Address, AssetId, std::uint64_t>, Commitment> commitments_;
};

enum class EscrowKind { Transfer, BridgeLock, BridgeBurn };
std::string_view escrow_kind_name(EscrowKind k);

struct EscrowEntry {
  TxHash tx_hash;
  Address account;
  AssetId asset;
  std::uint64_t amount = 0;
  std::uint64_t fee = 0;
  std::uint64_t created_tick = 0;
  std::uint64_t expiry_tick = 0;
  EscrowKind kind = EscrowKind::Transfer;
  /// Bridge escrows only.
  std::optional<bridge::BridgeOp> op;
};

class LedgerError : public std::runtime_error {
 public:
  enum class Code {
    DuplicateAsset,
    UnknownAsset,
    NotEnoughBalance,
    SelfTransfer,
    UnknownAccount,
    DuplicateAccount,
    UnknownEscrow,
    BadReceipt,
  };

  LedgerError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

std::string_view ledger_error_name(LedgerError::Code c);

struct Initiated {
  Transaction tx;
  TxValidityProof proof;
};

enum class FinalizeOutcome { Finalized, Refunded, Ignored };
std::string_view finalize_outcome_name(FinalizeOutcome o);

class ChainState {
 public:
  ChainState(std::string name, const Group& group, bool external = false,
             std::uint64_t escrow_expiry = kDefaultEscrowExpiry);

  const ChainId& id() const { return id_; }
  const std::string& name() const { return name_; }
  bool external() const { return external_; }
  const Group& group() const { return *group_; }
  std::uint64_t escrow_expiry() const { return escrow_expiry_; }

  // -- assets --
  void register_asset(const AssetSpec& spec);
  const AssetSpec* find_asset(const AssetId& id) const;
  const std::map<AssetId, AssetSpec>& assets() const { return assets_; }

  // -- accounts --
  /// Accounts created without a key can receive but never send.
  void create_account(const Address& a, const std::optional<Element>& pk, std::string label,
                      bool frozen = false);
  bool has_account(const Address& a) const { return accounts_.contains(a); }
  const AccountState& account(const Address& a) const;
  const std::map<Address, AccountState>& accounts() const { return accounts_; }
  std::uint64_t balance(const Address& a, const AssetId& asset) const;
  void set_frozen(const Address& a, bool frozen);
  /// Genesis allocation; the asset must be registered here.
  void credit_genesis(const Address& a, const AssetId& asset, std::uint64_t amount);
  /// Where fees of finalized transfers go.
  void set_fee_account(const Address& a);
  const std::optional<Address>& fee_account() const { return fee_account_; }

  const PublicBoard& board() const { return board_; }
  const bridge::BridgeBook& bridge_book() const { return bridge_; }

  // -- outbound --
  /// Publishes a fresh commitment to the sender's balance, proves against it,
  /// moves amount + fee into escrow and bumps the nonce.
  Initiated initiate_transfer(const Keypair& sender, const Address& receiver,
                              std::uint64_t amount, const AssetId& asset, std::uint64_t fee,
                              const ChainId& dest_chain, std::uint64_t tick,
                              netsim::RngStream& rng,
                              const std::optional<bridge::BridgeOp>& op = std::nullopt);

  const std::map<TxHash, EscrowEntry>& escrows() const { return escrows_; }
  const EscrowEntry* find_escrow(const TxHash& h) const;
  /// Moves an escrow to a new key (used when a dishonest origin rewrites a
  /// transaction after initiating it).
  void rekey_escrow(const TxHash& old_hash, const TxHash& new_hash);

  /// Verifies the relay signature, then settles the escrow. ReplayedNonce
  /// receipts concern a duplicate submission and leave the escrow alone.
  FinalizeOutcome finalize_receipt(const TxHash& tx_hash, const ValidityResult& result,
                                   const crypto::Signature& relay_signature,
                                   const Element& relay_pk);
  /// Refunds every escrow whose expiry tick has been reached.
  std::vector<EscrowEntry> expire_escrows(std::uint64_t tick);

  // -- inbound --
  /// Re-verifies against the origin's board and credits the receiver.
  /// Idempotent per tx hash.
  ValidityResult execute_inbound(const Transaction& tx, const TxValidityProof& proof,
                                 const PublicBoard& origin_board,
                                 const std::optional<bridge::BridgeOp>& op);
  bool already_executed(const TxHash& h) const { return inbound_.contains(h); }

  /// Canonical JSON state: keys sorted, integers as decimal strings.
  nlohmann::json snapshot() const;

 private:
  AccountState& mutable_account(const Address& a);
  void credit(const Address& a, const AssetId& asset, std::uint64_t amount);
  ValidityResult apply_inbound(const Transaction& tx, const std::optional<bridge::BridgeOp>& op);

  std::string name_;
  ChainId id_;
  const Group* group_;
  bool external_;
  std::uint64_t escrow_expiry_;

  std::map<AssetId, AssetSpec> assets_;
  std::map<Address, AccountState> accounts_;
  std::map<TxHash, EscrowEntry> escrows_;
  std::map<TxHash, ValidityResult> inbound_;
  std::optional<Address> fee_account_;
  PublicBoard board_;
  bridge::BridgeBook bridge_;
};

/// The bytes a relay signs for a receipt: tx_hash || result code.
Bytes receipt_message(const TxHash& h, const ValidityResult& r);

}  // namespace ztc::ledger
