#include "genhankel/matrix.hpp"

#include <cmath>

namespace genhankel {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

PatternedMatrix build_matrix(std::int64_t n, const LinkSpec& link, InputDistribution dist,
                             std::uint64_t seed, std::uint64_t replicate) {
  const std::int64_t a = link.modulus(n);
  PatternedMatrix out;
  out.n = n;
  out.link = link;
  out.seed = seed;
  out.replicate = replicate;

  Engine eng = make_engine(seed, replicate);
  out.inputs.resize(static_cast<std::size_t>(a));
  for (auto& x : out.inputs) x = draw(dist, eng);

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> scaled(out.inputs.size());
  for (std::size_t r = 0; r < scaled.size(); ++r) scaled[r] = out.inputs[r] * scale;

  const auto un = static_cast<std::size_t>(n);
  out.entries = Matrix(un);
  for (std::int64_t i = 1; i <= n; ++i) {
    auto row = out.entries.row(static_cast<std::size_t>(i - 1));
    std::int64_t r = (i + 1) % a;  // link value of (i, 1)
    for (std::size_t c = 0; c < un; ++c) {
      row[c] = scaled[static_cast<std::size_t>(r)];
      if (++r == a) r = 0;
    }
  }
  return out;
}

}  // namespace genhankel
