#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace cfrelay {

constexpr int kMaxRelays = 8;

/// A set of relay indices drawn from N = {1..n}. Bit (i-1) stands for relay i.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

  static constexpr SubsetMask empty() { return SubsetMask{}; }
  static constexpr SubsetMask full(int n) { return SubsetMask{(1u << n) - 1u}; }
  static constexpr SubsetMask single(int relay) { return SubsetMask{1u << (relay - 1)}; }
  static SubsetMask from_indices(const std::vector<int>& relays);

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr bool contains(int relay) const { return (bits_ >> (relay - 1)) & 1u; }
  constexpr bool subset_of(SubsetMask other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(SubsetMask other) const { return (bits_ & other.bits_) == 0; }
  constexpr int size() const { return std::popcount(bits_); }

  /// Complement within {1..n}.
  constexpr SubsetMask complement(int n) const { return SubsetMask{~bits_ & full(n).bits_}; }

  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask{bits_ | o.bits_}; }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask{bits_ & o.bits_}; }
  /// Set difference.
  constexpr SubsetMask operator-(SubsetMask o) const { return SubsetMask{bits_ & ~o.bits_}; }
  constexpr bool operator==(const SubsetMask&) const = default;

  /// 1-based sorted relay indices.
  std::vector<int> indices() const;
  /// "{1,3}" style rendering; "{}" for the empty set.
  std::string to_string() const;

 private:
  std::uint32_t bits_ = 0;
};

/// Strict weak order on sorted index lists ({1} < {1,2} < {2}); the empty set sorts first.
bool lexicographically_less(SubsetMask a, SubsetMask b);

/// All subsets of `of`, including the empty set and `of` itself, in increasing bit order.
std::vector<SubsetMask> subsets_of(SubsetMask of);

}  // namespace cfrelay
