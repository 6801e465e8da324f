#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ztc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

/// Thrown when a wire encoding is truncated, oversized or otherwise malformed.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Digest sha256(ByteView data);
Digest sha256(std::string_view data);

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Fixed-width identifier; Tag keeps addresses, chain ids and asset ids apart.
template <std::size_t N, typename Tag>
struct FixedBytes {
  static constexpr std::size_t size = N;
  std::array<std::uint8_t, N> bytes{};

  FixedBytes() = default;
  explicit FixedBytes(const std::array<std::uint8_t, N>& b) : bytes(b) {}

  static FixedBytes from_view(ByteView v) {
    if (v.size() != N) {
      throw DecodeError("fixed-width field has wrong length");
    }
    FixedBytes out;
    std::copy(v.begin(), v.end(), out.bytes.begin());
    return out;
  }

  /// Parses "0x"-prefixed or bare hex of exactly N bytes.
  static FixedBytes from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) {
      hex.remove_prefix(2);
    }
    return from_view(ztc::from_hex(hex));
  }

  ByteView view() const { return {bytes.data(), bytes.size()}; }
  std::string hex() const { return "0x" + to_hex(view()); }

  auto operator<=>(const FixedBytes&) const = default;
};

/// Big-endian builder for canonical encodings.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(v); }
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_raw(ByteView v) { buf_.insert(buf_.end(), v.begin(), v.end()); }
  /// u32 length prefix followed by the bytes.
  void put_lp(ByteView v);
  void put_lp(std::string_view v) { put_lp(as_bytes(v)); }
  void put_lp_u64(std::uint64_t v);

  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::uint8_t get_u8();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  ByteView get_raw(std::size_t n);
  ByteView get_lp();
  std::uint64_t get_lp_u64();

  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) {
      throw DecodeError("trailing bytes after encoding");
    }
  }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace ztc
