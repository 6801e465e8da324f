#include "ztc/crypto/group.hpp"

#include <stdexcept>
#include <string>

namespace ztc::crypto {

namespace {

// Safe prime from tools/paramgen/gen_production_group.py (label
// "ZTC/production-group/v1"). p = 2q + 1, both prime.
constexpr const char* kProductionP =
    "0x9af8f1191dbf7668b25ba21a5bf058dcda7a7ceecf16a0b4eb52432c62de37cf";
constexpr const char* kProductionQ =
    "0x4d7c788c8edfbb34592dd10d2df82c6e6d3d3e77678b505a75a92196316f1be7";
constexpr unsigned long kProductionG = 4;

constexpr unsigned long kTinyP = 607;
constexpr unsigned long kTinyQ = 101;
// Smallest h in Z_607 with h^101 = 1, h != 1.
constexpr unsigned long kTinyG = 7;

std::size_t byte_width(const BigInt& v) {
  return (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
}

void export_fixed(ByteWriter& w, const BigInt& v, std::size_t width) {
  Bytes out(width, 0);
  std::size_t count = 0;
  if (v != 0) {
    std::size_t needed = byte_width(v);
    if (needed > width) {
      throw std::logic_error("value wider than canonical encoding");
    }
    mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0, v.get_mpz_t());
  }
  w.put_raw(out);
}

BigInt import_be(ByteView b) {
  BigInt v;
  if (!b.empty()) {
    mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  }
  return v;
}

}  // namespace

std::string_view profile_name(Profile p) {
  return p == Profile::Production ? "production" : "tiny";
}

Profile parse_profile(std::string_view name) {
  if (name == "production") return Profile::Production;
  if (name == "tiny") return Profile::Tiny;
  throw std::invalid_argument("unknown group profile: " + std::string(name));
}

Group::Group(Profile profile) {
  params_.profile = profile;
  if (profile == Profile::Production) {
    params_.p = BigInt(kProductionP);
    params_.q = BigInt(kProductionQ);
    params_.g = Element(BigInt(kProductionG));
  } else {
    params_.p = kTinyP;
    params_.q = kTinyQ;
    params_.g = Element(BigInt(kTinyG));
  }
  element_width_ = byte_width(params_.p);
  scalar_width_ = byte_width(params_.q);
  safe_prime_ = (params_.p == 2 * params_.q + 1);

  // H: hash G's encoding into Z_p and clear the cofactor, so nobody knows
  // log_G(H).
  const BigInt cofactor = (params_.p - 1) / params_.q;
  const Bytes g_enc = encode(params_.g);
  for (std::uint32_t ctr = 0;; ++ctr) {
    ByteWriter w;
    w.put_raw(as_bytes("ZTC/H"));
    w.put_u8(0);
    w.put_raw(g_enc);
    w.put_u32(ctr);
    Digest d = sha256(w.bytes());
    BigInt x = import_be(d) % params_.p;
    BigInt h;
    mpz_powm(h.get_mpz_t(), x.get_mpz_t(), cofactor.get_mpz_t(), params_.p.get_mpz_t());
    if (h != 1 && h != 0) {
      params_.h = Element(h);
      break;
    }
  }
}

const Group& Group::production() {
  static const Group g(Profile::Production);
  return g;
}

const Group& Group::tiny() {
  static const Group g(Profile::Tiny);
  return g;
}

const Group& Group::get(Profile profile) {
  return profile == Profile::Production ? production() : tiny();
}

GroupParams group_setup(Profile profile) { return Group::get(profile).params(); }

Element Group::mul(const Element& a, const Element& b) const {
  BigInt r = a.v * b.v;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), params_.p.get_mpz_t());
  return Element(std::move(r));
}

Element Group::inv(const Element& a) const {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.v.get_mpz_t(), params_.p.get_mpz_t()) == 0) {
    throw std::domain_error("element has no inverse");
  }
  return Element(std::move(r));
}

Element Group::pow(const Element& base, const Scalar& e) const {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.v.get_mpz_t(), e.v.get_mpz_t(), params_.p.get_mpz_t());
  return Element(std::move(r));
}

bool Group::is_member(const Element& a) const {
  if (a.v < 1 || a.v >= params_.p) {
    return false;
  }
  if (safe_prime_) {
    // Order-q subgroup of a safe-prime group = quadratic residues.
    return mpz_legendre(a.v.get_mpz_t(), params_.p.get_mpz_t()) == 1;
  }
  BigInt r;
  mpz_powm(r.get_mpz_t(), a.v.get_mpz_t(), params_.q.get_mpz_t(), params_.p.get_mpz_t());
  return r == 1;
}

Scalar Group::scalar(std::uint64_t v) const {
  BigInt x;
  mpz_import(x.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return reduce(x);
}

Scalar Group::reduce(const BigInt& v) const {
  BigInt r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), params_.q.get_mpz_t());
  return Scalar(std::move(r));
}

Scalar Group::add(const Scalar& a, const Scalar& b) const { return reduce(a.v + b.v); }
Scalar Group::sub(const Scalar& a, const Scalar& b) const { return reduce(a.v - b.v); }
Scalar Group::mul(const Scalar& a, const Scalar& b) const { return reduce(a.v * b.v); }
Scalar Group::neg(const Scalar& a) const { return reduce(-a.v); }

Scalar Group::inverse(const Scalar& a) const {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.v.get_mpz_t(), params_.q.get_mpz_t()) == 0) {
    throw std::domain_error("zero scalar has no inverse");
  }
  return Scalar(std::move(r));
}

Scalar Group::random_scalar(netsim::RngStream& rng) const {
  const std::size_t words = (scalar_width_ + 8 + 7) / 8;
  BigInt acc = 0;
  for (std::size_t i = 0; i < words; ++i) {
    std::uint64_t w = rng.next();
    BigInt part;
    mpz_import(part.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    acc = (acc << 64) + part;
  }
  return reduce(acc);
}

Scalar Group::random_nonzero_scalar(netsim::RngStream& rng) const {
  for (;;) {
    Scalar s = random_scalar(rng);
    if (!s.is_zero()) {
      return s;
    }
  }
}

Scalar Group::hash_to_scalar(std::string_view domain_tag, ByteView payload) const {
  if (domain_tag.empty()) {
    throw std::invalid_argument("hash_to_scalar: empty domain tag");
  }
  ByteWriter w;
  w.put_raw(as_bytes(domain_tag));
  w.put_u8(0);
  w.put_raw(payload);
  Digest d = sha256(w.bytes());
  return reduce(import_be(d));
}

void Group::encode(ByteWriter& w, const Element& e) const { export_fixed(w, e.v, element_width_); }
void Group::encode(ByteWriter& w, const Scalar& s) const { export_fixed(w, s.v, scalar_width_); }

Bytes Group::encode(const Element& e) const {
  ByteWriter w;
  encode(w, e);
  return w.take();
}

Bytes Group::encode(const Scalar& s) const {
  ByteWriter w;
  encode(w, s);
  return w.take();
}

Element Group::decode_element(ByteView b) const {
  if (b.size() != element_width_) {
    throw DecodeError("element encoding has wrong width");
  }
  BigInt v = import_be(b);
  if (v >= params_.p) {
    throw DecodeError("element encoding out of range");
  }
  return Element(std::move(v));
}

Scalar Group::decode_scalar(ByteView b) const {
  if (b.size() != scalar_width_) {
    throw DecodeError("scalar encoding has wrong width");
  }
  BigInt v = import_be(b);
  if (v >= params_.q) {
    throw DecodeError("scalar encoding out of range");
  }
  return Scalar(std::move(v));
}

Commitment pedersen_commit(const Scalar& value, const Scalar& blinding, const Group& group) {
  return Commitment{group.mul(group.pow_g(value), group.pow_h(blinding))};
}

Commitment commit_mul(const Commitment& a, const Commitment& b, const Group& group) {
  return Commitment{group.mul(a.element, b.element)};
}

Commitment commit_sub_public(const Commitment& c, const Scalar& amount, const Group& group) {
  return Commitment{group.mul(c.element, group.pow_g(group.neg(amount)))};
}

}  // namespace ztc::crypto
