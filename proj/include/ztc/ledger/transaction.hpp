#pragma once

#include <cstdint>
#include <string_view>

#include "ztc/common/bytes.hpp"
#include "ztc/crypto/group.hpp"

namespace ztc::ledger {

struct AddressTag {};
struct ChainIdTag {};
struct AssetIdTag {};
struct TxHashTag {};

/// SHA-256(pk encoding) truncated to 20 bytes.
using Address = FixedBytes<20, AddressTag>;
using ChainId = FixedBytes<32, ChainIdTag>;
using AssetId = FixedBytes<32, AssetIdTag>;
using TxHash = FixedBytes<32, TxHashTag>;

Address address_of(const crypto::Element& pk, const crypto::Group& group);
/// Left-pads a small integer into an address, e.g. 0x5678 -> 0x00..5678.
Address address_from_u64(std::uint64_t v);

ChainId chain_id_from_name(std::string_view name);
AssetId asset_id_from_symbol(std::string_view symbol);
/// Id of the wrapped representation of `underlying` minted on `remote`.
AssetId wrapped_asset_id(const AssetId& underlying, const ChainId& remote);

/// Cross-chain transfer intent. The signature is carried on the wire but is
/// not part of the hash preimage.
struct Transaction {
  Address sender;
  Address receiver;
  std::uint64_t amount = 0;
  AssetId asset;
  std::uint64_t fee = 0;
  std::uint64_t nonce = 0;
  ChainId origin_chain;
  ChainId dest_chain;
  Bytes signature;

  /// Length-prefixed fields in declaration order, signature excluded.
  Bytes canonical_encoding() const;
  TxHash hash() const;

  /// Canonical encoding followed by the length-prefixed signature.
  Bytes serialize() const;
  static Transaction deserialize(ByteView bytes);

  bool operator==(const Transaction&) const = default;
};

}  // namespace ztc::ledger
