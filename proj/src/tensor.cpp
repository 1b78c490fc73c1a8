#include "sigshape/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "sigshape/error.hpp"

namespace sigshape {

namespace {

std::atomic<std::size_t> g_coefficient_cap{10'000'000};

void require_same_shape(const TruncatedTensor& a, const TruncatedTensor& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch, "tensors over (D=" + std::to_string(a.alphabet()) +
                                              ", N=" + std::to_string(a.depth()) + ") and (D=" +
                                              std::to_string(b.alphabet()) + ", N=" + std::to_string(b.depth()) + ")");
  }
}

// out += a (x) b for a on level p, b on level q.
void accumulate_outer(std::span<double> out, std::span<const double> a, std::span<const double> b) {
  const std::size_t nb = b.size();
  for (std::size_t u = 0; u < a.size(); ++u) {
    const double x = a[u];
    if (x == 0.0) continue;
    double* dst = out.data() + u * nb;
    for (std::size_t v = 0; v < nb; ++v) dst[v] += x * b[v];
  }
}

}  // namespace

std::size_t tensor_coefficient_cap() noexcept { return g_coefficient_cap.load(); }
void set_tensor_coefficient_cap(std::size_t cap) noexcept { g_coefficient_cap.store(cap); }

Word Word::reversed() const { return Word(std::vector<int>(letters_.rbegin(), letters_.rend())); }

TruncatedTensor::TruncatedTensor(int alphabet, int depth) : alphabet_(alphabet), depth_(depth) {
  if (alphabet < 1) throw Error(ErrorCode::InvalidArgument, "alphabet size must be positive");
  if (depth < 1 || depth > kMaxTensorDepth) {
    throw Error(ErrorCode::InvalidArgument, "truncation level must be in 1..6, got " + std::to_string(depth));
  }
  offsets_.resize(static_cast<std::size_t>(depth) + 2);
  offsets_[0] = 0;
  std::size_t width = 1;
  const std::size_t cap = tensor_coefficient_cap();
  for (int n = 0; n <= depth; ++n) {
    offsets_[n + 1] = offsets_[n] + width;
    if (offsets_[n + 1] > cap) {
      throw Error(ErrorCode::TensorTooLarge, "tensor over D=" + std::to_string(alphabet) + " at level " +
                                                 std::to_string(depth) + " exceeds the cap of " + std::to_string(cap) +
                                                 " coefficients");
    }
    width *= static_cast<std::size_t>(alphabet);
  }
  data_.assign(offsets_.back(), 0.0);
}

TruncatedTensor TruncatedTensor::unit(int alphabet, int depth) {
  TruncatedTensor t(alphabet, depth);
  t.scalar() = 1.0;
  return t;
}

TruncatedTensor TruncatedTensor::from_letters(int depth, std::span<const double> letters) {
  TruncatedTensor t(static_cast<int>(letters.size()), depth);
  std::copy(letters.begin(), letters.end(), t.level(1).begin());
  return t;
}

std::size_t TruncatedTensor::index_of(const Word& w) const {
  if (w.length() > depth_) {
    throw Error(ErrorCode::WordTooLong,
                "word of length " + std::to_string(w.length()) + " exceeds level " + std::to_string(depth_));
  }
  std::size_t idx = 0;
  for (int letter : w.letters()) {
    if (letter < 1 || letter > alphabet_) {
      throw Error(ErrorCode::InvalidArgument, "letter " + std::to_string(letter) + " outside 1.." +
                                                  std::to_string(alphabet_));
    }
    idx = idx * static_cast<std::size_t>(alphabet_) + static_cast<std::size_t>(letter - 1);
  }
  return offsets_[static_cast<std::size_t>(w.length())] + idx;
}

double TruncatedTensor::coefficient(const Word& w) const { return data_[index_of(w)]; }
double& TruncatedTensor::coefficient(const Word& w) { return data_[index_of(w)]; }

TruncatedTensor& TruncatedTensor::operator+=(const TruncatedTensor& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator-=(const TruncatedTensor& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b) { return a += b; }
TruncatedTensor operator-(TruncatedTensor a, const TruncatedTensor& b) { return a -= b; }
TruncatedTensor operator*(double s, TruncatedTensor a) { return a *= s; }

TruncatedTensor truncated_product(const TruncatedTensor& a, const TruncatedTensor& b) {
  require_same_shape(a, b);
  TruncatedTensor out(a.alphabet(), a.depth());
  for (int n = 0; n <= a.depth(); ++n) {
    auto dst = out.level(n);
    for (int p = 0; p <= n; ++p) accumulate_outer(dst, a.level(p), b.level(n - p));
  }
  return out;
}

TruncatedTensor tensor_exp(const TruncatedTensor& l) {
  if (l.scalar() != 0.0) {
    throw Error(ErrorCode::NonzeroScalarPart, "exp needs a zero scalar part, got " + std::to_string(l.scalar()));
  }
  const int depth = l.depth();
  TruncatedTensor result = TruncatedTensor::unit(l.alphabet(), depth);
  for (int k = depth; k >= 1; --k) {
    result = truncated_product(l, result);
    result *= 1.0 / k;
    result.scalar() += 1.0;
  }
  return result;
}

TruncatedTensor tensor_log(const TruncatedTensor& g) {
  if (std::abs(g.scalar() - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadScalarPart, "log needs scalar part 1, got " + std::to_string(g.scalar()));
  }
  const int depth = g.depth();
  TruncatedTensor x = g;
  x.scalar() = 0.0;
  const auto coeff = [](int n) { return (n % 2 == 1 ? 1.0 : -1.0) / n; };
  TruncatedTensor acc = TruncatedTensor::unit(g.alphabet(), depth);
  acc.scalar() = coeff(depth);
  for (int n = depth - 1; n >= 1; --n) {
    acc = truncated_product(x, acc);
    acc.scalar() += coeff(n);
  }
  return truncated_product(x, acc);
}

void multiply_by_exp(TruncatedTensor& g, std::span<const double> letters) {
  const int d = g.alphabet();
  if (static_cast<int>(letters.size()) != d) {
    throw Error(ErrorCode::ShapeMismatch,
                "level-1 vector of size " + std::to_string(letters.size()) + " for alphabet " + std::to_string(d));
  }
  const std::size_t ud = static_cast<std::size_t>(d);
  std::vector<double> cur(g.level_size(g.depth()));
  std::vector<double> next(g.level_size(g.depth()));
  // Level n of g (x) exp(b) is sum_k g_{n-k} b^k / k!, evaluated as
  // ((g_0 b / n + g_1) b / (n-1) + g_2) ... + g_n from the top level down so
  // that the lower levels are still the inputs.
  for (int n = g.depth(); n >= 1; --n) {
    cur[0] = g.scalar();
    std::size_t width = 1;
    for (int r = 1; r <= n; ++r) {
      const double scale = 1.0 / static_cast<double>(n - r + 1);
      const auto src = g.level(r);
      for (std::size_t u = 0; u < width; ++u) {
        const double x = cur[u] * scale;
        double* dst = next.data() + u * ud;
        const double* add = src.data() + u * ud;
        for (std::size_t v = 0; v < ud; ++v) dst[v] = x * letters[v] + add[v];
      }
      width *= ud;
      std::swap(cur, next);
    }
    std::copy_n(cur.begin(), width, g.level(n).begin());
  }
}

TruncatedTensor group_inverse(const TruncatedTensor& g) {
  TruncatedTensor out(g.alphabet(), g.depth());
  out.scalar() = g.scalar();
  const std::size_t d = static_cast<std::size_t>(g.alphabet());
  for (int n = 1; n <= g.depth(); ++n) {
    const auto src = g.level(n);
    auto dst = out.level(n);
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t idx = 0; idx < src.size(); ++idx) {
      std::size_t rest = idx;
      std::size_t rev = 0;
      for (int k = 0; k < n; ++k) {
        rev = rev * d + rest % d;
        rest /= d;
      }
      dst[rev] = sign * src[idx];
    }
  }
  return out;
}

double norm(const TruncatedTensor& t, bool include_scalar) {
  double s = include_scalar ? t.scalar() * t.scalar() : 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += t.data()[i] * t.data()[i];
  return std::sqrt(s);
}

double shuffle_check(const TruncatedTensor& g) {
  const std::size_t d = static_cast<std::size_t>(g.alphabet());
  double worst = 0.0;
  if (g.depth() < 2) return worst;
  const auto l1 = g.level(1);
  const auto l2 = g.level(2);
  // i sh j = ij + ji
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      worst = std::max(worst, std::abs(l1[i] * l1[j] - l2[i * d + j] - l2[j * d + i]));
    }
  }
  if (g.depth() < 3) return worst;
  const auto l3 = g.level(3);
  // i sh jk = ijk + jik + jki
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        const double lhs = l1[i] * l2[j * d + k];
        const double rhs = l3[(i * d + j) * d + k] + l3[(j * d + i) * d + k] + l3[(j * d + k) * d + i];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

double max_abs_diff(const TruncatedTensor& a, const TruncatedTensor& b) {
  require_same_shape(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace sigshape
