#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cfrelay/pmf.hpp"
#include "cfrelay/verify.hpp"
#include "oracle.hpp"

namespace fixtures {

using cfrelay::ChannelSpec;
using cfrelay::Mode;

inline double bsc(double eps, int in, int out) { return in == out ? 1.0 - eps : eps; }

using FullChannel = std::function<double(int x, const std::vector<int>& xs, int y, const std::vector<int>& ys)>;
using FullCompression = std::function<double(int relay, int xi, int yi, int yhat)>;
using DigitalChannel = std::function<double(int x, int y, const std::vector<int>& ys)>;
using DigitalCompression = std::function<double(int relay, int yi, int yhat)>;

inline std::vector<double> uniform(int k) { return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k); }

inline ChannelSpec make_full(int n, int ax, int axi, int ay, int ayi, int ayhat, const FullChannel& ch,
                             const FullCompression& comp) {
  ChannelSpec s;
  s.mode = Mode::Full;
  s.n = n;
  s.alphabet_x = ax;
  s.alphabet_y = ay;
  s.alphabet_xi.assign(static_cast<std::size_t>(n), axi);
  s.alphabet_yi.assign(static_cast<std::size_t>(n), ayi);
  s.alphabet_yhat_i.assign(static_cast<std::size_t>(n), ayhat);
  s.p_x = uniform(ax);
  for (int i = 0; i < n; ++i) s.p_xi.push_back(uniform(axi));
  std::vector<int> cards{ax};
  for (int i = 0; i < n; ++i) cards.push_back(axi);
  cards.push_back(ay);
  for (int i = 0; i < n; ++i) cards.push_back(ayi);
  oracle::for_each_tuple(cards, [&](const oracle::Tuple& t) {
    const std::vector<int> xs(t.begin() + 1, t.begin() + 1 + n);
    const std::vector<int> ys(t.begin() + 2 + n, t.end());
    s.channel.push_back(ch(t[0], xs, t[static_cast<std::size_t>(n + 1)], ys));
  });
  for (int i = 1; i <= n; ++i) {
    std::vector<double> c;
    oracle::for_each_tuple({axi, ayi, ayhat}, [&](const oracle::Tuple& t) { c.push_back(comp(i, t[0], t[1], t[2])); });
    s.compressions.push_back(c);
  }
  return s;
}

inline ChannelSpec make_digital(int n, int ax, int ay, int ayi, int ayhat, const DigitalChannel& ch,
                                const DigitalCompression& comp, std::vector<double> caps) {
  ChannelSpec s;
  s.mode = Mode::Digital;
  s.n = n;
  s.alphabet_x = ax;
  s.alphabet_y = ay;
  s.alphabet_yi.assign(static_cast<std::size_t>(n), ayi);
  s.alphabet_yhat_i.assign(static_cast<std::size_t>(n), ayhat);
  s.p_x = uniform(ax);
  std::vector<int> cards{ax, ay};
  for (int i = 0; i < n; ++i) cards.push_back(ayi);
  oracle::for_each_tuple(cards, [&](const oracle::Tuple& t) {
    s.channel.push_back(ch(t[0], t[1], std::vector<int>(t.begin() + 2, t.end())));
  });
  for (int i = 1; i <= n; ++i) {
    std::vector<double> c;
    oracle::for_each_tuple({ayi, ayhat}, [&](const oracle::Tuple& t) { c.push_back(comp(i, t[0], t[1])); });
    s.compressions.push_back(c);
  }
  s.link_capacities = std::move(caps);
  return s;
}

inline double identity(int in, int out) { return in == out ? 1.0 : 0.0; }

// Every compression emits letter 0 regardless of its input.
inline ChannelSpec with_constant_compressions(ChannelSpec s) {
  for (std::size_t i = 0; i < s.compressions.size(); ++i) {
    const auto size = static_cast<std::size_t>(s.alphabet_yhat_i[i]);
    for (std::size_t k = 0; k < s.compressions[i].size(); ++k) s.compressions[i][k] = k % size == 0 ? 1.0 : 0.0;
  }
  return s;
}

inline cfrelay::Instance random_instance(Mode mode, int n, std::uint64_t seed, std::uint64_t index,
                                         int alphabet = 2, double degenerate = 0.1) {
  cfrelay::InstanceGenerator gen;
  gen.mode = mode;
  gen.n = n;
  gen.seed = seed;
  gen.alphabets = {alphabet, alphabet, alphabet, alphabet, alphabet};
  gen.degenerate_ratio = degenerate;
  return cfrelay::generate_instance(gen, index);
}

inline std::string spec_path(const std::string& name) { return std::string(CFRELAY_SPEC_DIR) + "/" + name; }

}  // namespace fixtures
