#include "genhankel/linear_rep.hpp"

namespace genhankel {

LinearRep linear_representation(const Word& w) {
  LinearRep rep;
  rep.word = w;
  rep.generating = generating_vertices(w);
  const int len = w.length();
  const auto gen_count = rep.generating.size();
  const auto k = static_cast<std::size_t>(w.k());

  rep.generating_slot.assign(static_cast<std::size_t>(len + 1), -1);
  for (std::size_t g = 0; g < gen_count; ++g)
    rep.generating_slot[static_cast<std::size_t>(rep.generating[g])] = static_cast<int>(g);

  rep.vertex.assign(static_cast<std::size_t>(len + 1),
                    VertexRep{std::vector<std::int64_t>(gen_count, 0), std::vector<std::int64_t>(k, 0)});
  for (int v = 0; v <= len; ++v) {
    const int slot = rep.generating_slot[static_cast<std::size_t>(v)];
    if (slot >= 0) {
      rep.vertex[static_cast<std::size_t>(v)].nu[static_cast<std::size_t>(slot)] = 1;
      continue;
    }
    // v = j_s is the second occurrence of letter s, first at i_s:
    // nu_{j_s} = nu_{i_s - 1} + nu_{i_s} - nu_{j_s - 1} - gamma_s.
    const auto s = static_cast<std::size_t>(w.at(v));
    const int first = w.matches()[s].first;
    const auto& a = rep.vertex[static_cast<std::size_t>(first - 1)];
    const auto& b = rep.vertex[static_cast<std::size_t>(first)];
    const auto& c = rep.vertex[static_cast<std::size_t>(v - 1)];
    auto& out = rep.vertex[static_cast<std::size_t>(v)];
    for (std::size_t g = 0; g < gen_count; ++g) out.nu[g] = a.nu[g] + b.nu[g] - c.nu[g];
    for (std::size_t t = 0; t < k; ++t) out.gamma[t] = a.gamma[t] + b.gamma[t] - c.gamma[t];
    out.gamma[s] -= 1;
  }
  return rep;
}

Closure closure_type(const LinearRep& rep) {
  const auto& last = rep.vertex.back().nu;
  for (std::size_t g = 0; g < last.size(); ++g) {
    const std::int64_t expect = g == 0 ? 1 : 0;  // slot 0 is vertex 0
    if (last[g] != expect) return Closure::inconsistent;
  }
  return Closure::consistent;
}

const char* to_string(Closure c) {
  return c == Closure::consistent ? "consistent" : "inconsistent";
}

}  // namespace genhankel
