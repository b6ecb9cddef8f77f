#include "mchr/subset.hpp"

#include <charconv>

#include "mchr/errors.hpp"

namespace mchr {

SubsetMask SubsetMask::of(std::initializer_list<int> members) {
  SubsetMask s;
  for (int j : members) s = s.with(j);
  return s;
}

SubsetMask SubsetMask::of(const std::vector<int>& members) {
  SubsetMask s;
  for (int j : members) s = s.with(j);
  return s;
}

std::vector<int> SubsetMask::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

std::string SubsetMask::key() const {
  std::string out;
  for (int j : members()) {
    if (!out.empty()) out += ',';
    out += std::to_string(j + 1);
  }
  return out;
}

SubsetMask SubsetMask::parse_key(std::string_view key, int n) {
  SubsetMask s;
  if (key.empty()) return s;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t end = key.find(',', pos);
    if (end == std::string_view::npos) end = key.size();
    std::string_view tok = key.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
      throw ModelError("malformed index list \"" + std::string(key) + "\"");
    if (v < 1 || v > n)
      throw ModelError("index " + std::to_string(v) + " outside 1.." + std::to_string(n));
    if (s.contains(v - 1)) throw ModelError("duplicate index " + std::to_string(v));
    s = s.with(v - 1);
    pos = end + 1;
  }
  return s;
}

CompactSubsets::CompactSubsets(SubsetMask ground) : members_(ground.members()) {}

SubsetMask CompactSubsets::expand(std::uint32_t compact) const {
  std::uint32_t bits = 0;
  for (std::size_t p = 0; p < members_.size(); ++p)
    if ((compact >> p) & 1u) bits |= std::uint32_t{1} << members_[p];
  return SubsetMask(bits);
}

}  // namespace mchr
