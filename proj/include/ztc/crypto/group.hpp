#pragma once

// Prime-order subgroup of Z_p^* with Pedersen commitments.
//
// Two fixed parameter sets exist. Production is a 256-bit safe prime
// p = 2q + 1 with G = 4 generating the quadratic residues (order q, 255 bits).
// Tiny is p = 607, q = 101, small enough to enumerate every exponent, and is
// only meant for exhaustive tests.
//
// Canonical encodings are fixed-width big-endian: elements use the byte width
// of p, scalars the byte width of q. Every hash in the system is computed over
// these encodings.

#include <gmpxx.h>

#include <cstdint>
#include <string_view>

#include "ztc/common/bytes.hpp"
#include "ztc/netsim/rng.hpp"

namespace ztc::crypto {

using BigInt = mpz_class;

enum class Profile { Production, Tiny };

std::string_view profile_name(Profile p);
Profile parse_profile(std::string_view name);

/// Integer in [0, q).
struct Scalar {
  BigInt v;

  Scalar() : v(0) {}
  explicit Scalar(BigInt x) : v(std::move(x)) {}

  bool is_zero() const { return v == 0; }
  bool operator==(const Scalar& o) const { return v == o.v; }
};

/// Residue in [1, p) (membership in the order-q subgroup is checked on use).
struct Element {
  BigInt v;

  Element() : v(1) {}
  explicit Element(BigInt x) : v(std::move(x)) {}

  bool operator==(const Element& o) const { return v == o.v; }
};

struct Commitment {
  Element element;

  bool operator==(const Commitment& o) const { return element == o.element; }
};

struct GroupParams {
  Profile profile;
  BigInt p;
  BigInt q;
  Element g;
  Element h;
};

class Group {
 public:
  /// The two built-in groups; constructed once, immutable afterwards.
  static const Group& production();
  static const Group& tiny();
  static const Group& get(Profile profile);

  const GroupParams& params() const { return params_; }
  Profile profile() const { return params_.profile; }
  const BigInt& p() const { return params_.p; }
  const BigInt& q() const { return params_.q; }
  const Element& g() const { return params_.g; }
  const Element& h() const { return params_.h; }

  std::size_t element_width() const { return element_width_; }
  std::size_t scalar_width() const { return scalar_width_; }

  // -- group law --
  Element identity() const { return Element(1); }
  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  Element pow(const Element& base, const Scalar& e) const;
  Element pow_g(const Scalar& e) const { return pow(params_.g, e); }
  Element pow_h(const Scalar& e) const { return pow(params_.h, e); }
  /// True iff 1 <= a < p and a has order dividing q.
  bool is_member(const Element& a) const;

  // -- scalar field --
  Scalar scalar(std::uint64_t v) const;
  Scalar reduce(const BigInt& v) const;
  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  /// Multiplicative inverse; a must be non-zero.
  Scalar inverse(const Scalar& a) const;
  Scalar random_scalar(netsim::RngStream& rng) const;
  Scalar random_nonzero_scalar(netsim::RngStream& rng) const;

  /// SHA-256(tag || 0x00 || payload) as a big-endian integer mod q.
  Scalar hash_to_scalar(std::string_view domain_tag, ByteView payload) const;

  // -- canonical encodings --
  void encode(ByteWriter& w, const Element& e) const;
  void encode(ByteWriter& w, const Scalar& s) const;
  Bytes encode(const Element& e) const;
  Bytes encode(const Scalar& s) const;
  /// Width and range checked; subgroup membership is left to the verifier.
  Element decode_element(ByteView b) const;
  Scalar decode_scalar(ByteView b) const;

 private:
  explicit Group(Profile profile);

  GroupParams params_;
  std::size_t element_width_;
  std::size_t scalar_width_;
  bool safe_prime_;
};

/// The "setup" entry point: returns a copy of the fixed parameters.
GroupParams group_setup(Profile profile);

Commitment pedersen_commit(const Scalar& value, const Scalar& blinding, const Group& group);
Commitment commit_mul(const Commitment& a, const Commitment& b, const Group& group);
/// c * G^(-amount): debits a public amount from a committed value.
Commitment commit_sub_public(const Commitment& c, const Scalar& amount, const Group& group);

}  // namespace ztc::crypto
