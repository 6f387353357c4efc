#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hegsim {

using Bytes = std::vector<std::uint8_t>;

/// Canonical byte encoder. Field order is the caller's responsibility;
/// the widths are fixed: integers 8-byte big-endian, variable-length
/// fields 4-byte big-endian length prefix, enum/bool tags one byte.
/// Capacity limits travel as IEEE-754 bit patterns (8-byte big-endian),
/// with +infinity meaning "unbounded".
class Encoder {
 public:
  void put_u8(std::uint8_t v) { out_.push_back(v); }

  void put_u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
      out_.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
    }
  }

  void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }

  void put_f64(double v);

  void put_bool(bool v) { put_u8(v ? 1 : 0); }

  void put_u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
      out_.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
    }
  }

  void put_string(std::string_view s) {
    put_u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }

  void put_count(std::size_t n) { put_u32(static_cast<std::uint32_t>(n)); }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

std::string to_hex(std::span<const std::uint8_t> data);

/// Parses lowercase/uppercase hex; returns false on odd length or bad digit.
bool from_hex(std::string_view hex, Bytes& out);

}  // namespace hegsim
