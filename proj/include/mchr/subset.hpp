#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace mchr {

/// Hard cap on the number of variables; subset tables are exponential in n.
inline constexpr int kMaxVariables = 24;

/// A subset of the zero-based variable indices {0, ..., n-1} stored as a bitmask.
/// External representations (JSON keys, CLI flags, reports) are one-based.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

  static constexpr SubsetMask full(int n) {
    return SubsetMask(n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1u));
  }
  static constexpr SubsetMask single(int j) { return SubsetMask(std::uint32_t{1} << j); }
  static SubsetMask of(std::initializer_list<int> members);
  static SubsetMask of(const std::vector<int>& members);

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool contains(int j) const { return (bits_ >> j) & 1u; }
  constexpr SubsetMask with(int j) const { return SubsetMask(bits_ | (std::uint32_t{1} << j)); }
  constexpr SubsetMask without(int j) const { return SubsetMask(bits_ & ~(std::uint32_t{1} << j)); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr SubsetMask complement(int n) const { return SubsetMask(full(n).bits_ & ~bits_); }
  constexpr bool is_subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }

  /// Members in increasing order.
  std::vector<int> members() const;

  /// One-based, comma-separated, sorted; the empty set is "".
  std::string key() const;
  /// Inverse of key(); throws ModelError on malformed input or indices outside 1..n.
  static SubsetMask parse_key(std::string_view key, int n);

  friend constexpr SubsetMask operator|(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits_ | b.bits_); }
  friend constexpr SubsetMask operator&(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits_ & b.bits_); }
  friend constexpr auto operator<=>(SubsetMask, SubsetMask) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Visits every submask of `within` (including the empty set and `within`
/// itself) in increasing numeric order, so each set is visited after all of
/// its proper subsets.
template <class F>
void for_each_submask(SubsetMask within, F&& visit) {
  const std::uint32_t m = within.bits();
  std::uint32_t s = 0;
  do {
    visit(SubsetMask(s));
    s = (s - m) & m;
  } while (s != 0);
}

/// Maps submasks of a fixed ground set onto dense indices 0 .. 2^|ground|-1.
class CompactSubsets {
 public:
  explicit CompactSubsets(SubsetMask ground);

  int ground_size() const { return static_cast<int>(members_.size()); }
  std::uint32_t count() const { return std::uint32_t{1} << members_.size(); }
  const std::vector<int>& members() const { return members_; }

  /// Expands a dense index into the corresponding submask of the ground set.
  SubsetMask expand(std::uint32_t compact) const;

 private:
  std::vector<int> members_;
};

}  // namespace mchr
