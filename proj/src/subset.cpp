#include "cfrelay/subset.hpp"

#include <algorithm>

#include "cfrelay/error.hpp"

namespace cfrelay {

SubsetMask SubsetMask::from_indices(const std::vector<int>& relays) {
  std::uint32_t bits = 0;
  for (int r : relays) {
    if (r < 1 || r > kMaxRelays) {
      throw Error(ErrorCode::InvalidArgument, "relay index " + std::to_string(r) + " out of range");
    }
    bits |= 1u << (r - 1);
  }
  return SubsetMask{bits};
}

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  for (int i = 1; i <= 32; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string SubsetMask::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int i : indices()) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

bool lexicographically_less(SubsetMask a, SubsetMask b) {
  const auto ia = a.indices();
  const auto ib = b.indices();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

std::vector<SubsetMask> subsets_of(SubsetMask of) {
  std::vector<SubsetMask> out;
  out.reserve(std::size_t{1} << of.size());
  // Enumerate submasks in increasing order.
  std::uint32_t sub = 0;
  const std::uint32_t m = of.bits();
  while (true) {
    out.emplace_back(sub);
    if (sub == m) break;
    sub = (sub - m) & m;
  }
  return out;
}

}  // namespace cfrelay
