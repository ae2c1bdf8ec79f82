#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace mpmd {

using RequestId = std::size_t;

/// Set of request ids as a 64-bit mask; ids are dense and assigned in arrival order.
class RequestSet {
 public:
  using Bits = std::uint64_t;
  static constexpr std::size_t kCapacity = 64;

  constexpr RequestSet() = default;
  constexpr explicit RequestSet(Bits bits) : bits_(bits) {}
  RequestSet(std::initializer_list<RequestId> ids) {
    for (RequestId id : ids) bits_ |= Bits{1} << id;
  }

  /// {0, 1, ..., n-1}
  static constexpr RequestSet first(std::size_t n) {
    return RequestSet(n >= kCapacity ? ~Bits{0} : (Bits{1} << n) - 1);
  }
  static RequestSet of(const std::vector<RequestId>& ids) {
    RequestSet s;
    for (RequestId id : ids) s = s.with(id);
    return s;
  }

  constexpr Bits bits() const { return bits_; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(RequestId id) const { return (bits_ >> id) & 1U; }
  constexpr bool subset_of(RequestSet other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr RequestSet with(RequestId id) const { return RequestSet(bits_ | (Bits{1} << id)); }
  constexpr RequestSet without(RequestId id) const { return RequestSet(bits_ & ~(Bits{1} << id)); }

  friend constexpr RequestSet operator|(RequestSet a, RequestSet b) { return RequestSet(a.bits_ | b.bits_); }
  friend constexpr RequestSet operator&(RequestSet a, RequestSet b) { return RequestSet(a.bits_ & b.bits_); }
  friend constexpr RequestSet operator^(RequestSet a, RequestSet b) { return RequestSet(a.bits_ ^ b.bits_); }
  /// Set difference.
  friend constexpr RequestSet operator-(RequestSet a, RequestSet b) { return RequestSet(a.bits_ & ~b.bits_); }

  friend constexpr bool operator==(RequestSet, RequestSet) = default;
  friend constexpr auto operator<=>(RequestSet a, RequestSet b) { return a.bits_ <=> b.bits_; }

  /// Members in increasing id order.
  std::vector<RequestId> members() const {
    std::vector<RequestId> out;
    out.reserve(size());
    for (Bits b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<RequestId>(std::countr_zero(b)));
    return out;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (Bits b = bits_; b != 0; b &= b - 1) fn(static_cast<RequestId>(std::countr_zero(b)));
  }

  /// "{0,3,5}"
  std::string to_string() const {
    std::string s = "{";
    bool first_member = true;
    for_each([&](RequestId id) {
      if (!first_member) s += ',';
      s += std::to_string(id);
      first_member = false;
    });
    return s + "}";
  }

 private:
  Bits bits_ = 0;
};

}  // namespace mpmd
