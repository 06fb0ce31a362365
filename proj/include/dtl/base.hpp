#pragma once

#include <cstdint>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtl {

struct ParseError : std::runtime_error {
  int line = -1, column = -1;
  ParseError(const std::string& msg, int ln = -1, int col = -1)
      : std::runtime_error(ln >= 0 ? msg + " (line " + std::to_string(ln) +
                                         ", column " + std::to_string(col) + ")"
                                   : msg),
        line(ln), column(col) {}
};

struct UnfairWord : std::runtime_error {
  std::vector<std::string> starved;
  explicit UnfairWord(std::vector<std::string> agents)
      : std::runtime_error("word is not fair; starved agent(s): " + join(agents)),
        starved(std::move(agents)) {}
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& a : v) { if (!s.empty()) s += ", "; s += a; }
    return s;
  }
};

struct LabelMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// raised when two routes that must agree by construction disagree;
// always indicates a bug, never bad user input
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct Budget {
  std::size_t max_states = 4'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  void charge(std::size_t states) const {
    if (states > max_states)
      throw ResourceCapExceeded("state cap exceeded (" +
                                std::to_string(max_states) + ")");
    if (deadline && std::chrono::steady_clock::now() > *deadline)
      throw ResourceCapExceeded("time cap exceeded");
  }
};

// fixed-width bitset sized for closure tables (members are formula ids)
struct SmallBitset {
  static constexpr int capacity = 128;
  std::uint64_t w0 = 0, w1 = 0;

  static void check_index(int i) {
    if (i < 0 || i >= capacity)
      throw ResourceCapExceeded("formula table exceeds " +
                                std::to_string(capacity) + " entries");
  }
  bool test(int i) const {
    check_index(i);
    return ((i < 64 ? w0 >> i : w1 >> (i - 64)) & 1u) != 0;
  }
  void set(int i, bool v = true) {
    check_index(i);
    std::uint64_t m = std::uint64_t(1) << (i & 63);
    std::uint64_t& w = i < 64 ? w0 : w1;
    if (v) w |= m; else w &= ~m;
  }
  int count() const { return __builtin_popcountll(w0) + __builtin_popcountll(w1); }
  bool empty() const { return w0 == 0 && w1 == 0; }
  bool subset_of(const SmallBitset& o) const {
    return (w0 & ~o.w0) == 0 && (w1 & ~o.w1) == 0;
  }
  bool intersects(const SmallBitset& o) const {
    return (w0 & o.w0) != 0 || (w1 & o.w1) != 0;
  }
  friend SmallBitset operator&(SmallBitset a, const SmallBitset& b) {
    a.w0 &= b.w0; a.w1 &= b.w1; return a;
  }
  friend SmallBitset operator|(SmallBitset a, const SmallBitset& b) {
    a.w0 |= b.w0; a.w1 |= b.w1; return a;
  }
  friend SmallBitset operator^(SmallBitset a, const SmallBitset& b) {
    a.w0 ^= b.w0; a.w1 ^= b.w1; return a;
  }
  SmallBitset and_not(const SmallBitset& o) const {
    SmallBitset r = *this; r.w0 &= ~o.w0; r.w1 &= ~o.w1; return r;
  }
  bool operator==(const SmallBitset&) const = default;
  auto operator<=>(const SmallBitset& o) const {
    if (auto c = w1 <=> o.w1; c != 0) return c;
    return w0 <=> o.w0;
  }
  std::size_t hash() const {
    std::size_t h = w0 * 0x9e3779b97f4a7c15ull;
    h ^= w1 + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t w = w0; w;) { int b = __builtin_ctzll(w); w &= w - 1; f(b); }
    for (std::uint64_t w = w1; w;) { int b = __builtin_ctzll(w); w &= w - 1; f(b + 64); }
  }
};

inline std::size_t hash_mix(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

}  // namespace dtl
