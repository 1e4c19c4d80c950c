#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace xorlab {

enum class Msg : std::uint8_t { u = 0, f = 1 };
enum class Label : std::uint8_t { u = 0, s = 1, f = 2 };

inline constexpr std::array<Label, 3> kLabels = {Label::u, Label::s, Label::f};

inline char to_char(Msg m) { return m == Msg::f ? 'f' : 'u'; }
inline char to_char(Label z) { return z == Label::u ? 'u' : (z == Label::s ? 's' : 'f'); }

/// Per-node message pair counts: l_st = #incident edges with incoming s and outgoing t.
struct StatKey {
  std::uint32_t uu = 0, uf = 0, fu = 0, ff = 0;

  std::uint32_t degree() const { return uu + uf + fu + ff; }
  std::string str() const {
    return std::to_string(uu) + "-" + std::to_string(uf) + "-" + std::to_string(fu) + "-" + std::to_string(ff);
  }
  friend auto operator<=>(const StatKey&, const StatKey&) = default;
};

/// Admissible keys for a variable labelled z.
inline bool in_variable_class(Label z, const StatKey& l) {
  switch (z) {
    case Label::u:
      return l.fu == 0 && l.uf == 0 && l.ff == 0;
    case Label::s:
      return l.fu == 1 && l.ff == 0 && l.uu == 0;
    case Label::f:
      return l.uu == 0 && l.fu == 0 && l.ff >= 2;
  }
  return false;
}

/// Admissible keys for a check labelled z (checks of weight k).
inline bool in_check_class(Label z, const StatKey& l, std::uint32_t k) {
  switch (z) {
    case Label::u:
      return l.uf == 0 && l.ff == 0 && l.uu >= 2 && l.uu <= k && l.fu == k - l.uu;
    case Label::s:
      return l.uu == 0 && l.ff == 0 && l.uf == 1 && l.fu == k - 1;
    case Label::f:
      return l.uu == 0 && l.uf == 0 && l.fu == 0 && l.ff == k;
  }
  return false;
}

}  // namespace xorlab
