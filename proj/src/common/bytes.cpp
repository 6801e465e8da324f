#include "ztc/common/bytes.hpp"

#include <openssl/sha.h>

namespace ztc {

Digest sha256(ByteView data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest sha256(std::string_view data) { return sha256(as_bytes(data)); }

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {

int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw DecodeError("hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw DecodeError("invalid hex digit");
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

void ByteWriter::put_u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    buf_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::put_u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    buf_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::put_lp(ByteView v) {
  if (v.size() > UINT32_MAX) {
    throw std::length_error("field too long for u32 length prefix");
  }
  put_u32(static_cast<std::uint32_t>(v.size()));
  put_raw(v);
}

void ByteWriter::put_lp_u64(std::uint64_t v) {
  put_u32(8);
  put_u64(v);
}

ByteView ByteReader::get_raw(std::size_t n) {
  if (n > data_.size() - pos_) {
    throw DecodeError("truncated encoding");
  }
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::get_u8() { return get_raw(1)[0]; }

std::uint32_t ByteReader::get_u32() {
  std::uint32_t v = 0;
  for (std::uint8_t b : get_raw(4)) {
    v = (v << 8) | b;
  }
  return v;
}

std::uint64_t ByteReader::get_u64() {
  std::uint64_t v = 0;
  for (std::uint8_t b : get_raw(8)) {
    v = (v << 8) | b;
  }
  return v;
}

ByteView ByteReader::get_lp() {
  std::uint32_t n = get_u32();
  return get_raw(n);
}

std::uint64_t ByteReader::get_lp_u64() {
  ByteView field = get_lp();
  if (field.size() != 8) {
    throw DecodeError("integer field must be 8 bytes");
  }
  ByteReader inner(field);
  return inner.get_u64();
}

}  // namespace ztc
