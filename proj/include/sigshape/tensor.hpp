#pragma once

// Truncated tensor algebra T^{(N)}(R^D).
//
// Storage is dense and level-major: level n holds D^n coefficients in
// row-major word order, so the word i_1...i_n (letters 1..D) lives at offset
// sum_j (i_j - 1) D^{n-j} inside its level.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sigshape {

inline constexpr int kMaxTensorDepth = 6;

/// Total-coefficient cap enforced when a tensor is allocated (default 1e7).
std::size_t tensor_coefficient_cap() noexcept;
void set_tensor_coefficient_cap(std::size_t cap) noexcept;

/// Sequence of letters in 1..D.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters) : letters_(letters) {}
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}

  int length() const noexcept { return static_cast<int>(letters_.size()); }
  std::span<const int> letters() const noexcept { return letters_; }
  Word reversed() const;

 private:
  std::vector<int> letters_;
};

class TruncatedTensor {
 public:
  /// Zero tensor. Throws InvalidArgument for D < 1 or N outside 1..6 and
  /// TensorTooLarge when the coefficient count exceeds the cap.
  TruncatedTensor(int alphabet, int depth);

  static TruncatedTensor unit(int alphabet, int depth);
  /// Element supported on level 1 with the given letter coefficients.
  static TruncatedTensor from_letters(int depth, std::span<const double> letters);

  int alphabet() const noexcept { return alphabet_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t level_size(int n) const { return offsets_[n + 1] - offsets_[n]; }

  std::span<double> level(int n) { return {data_.data() + offsets_[n], level_size(n)}; }
  std::span<const double> level(int n) const { return {data_.data() + offsets_[n], level_size(n)}; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double scalar() const noexcept { return data_[0]; }
  double& scalar() noexcept { return data_[0]; }

  /// Coefficient of e_w; throws WordTooLong for |w| > N and InvalidArgument
  /// for letters outside 1..D.
  double coefficient(const Word& w) const;
  double& coefficient(const Word& w);

  bool same_shape(const TruncatedTensor& other) const noexcept {
    return alphabet_ == other.alphabet_ && depth_ == other.depth_;
  }

  TruncatedTensor& operator+=(const TruncatedTensor& rhs);
  TruncatedTensor& operator-=(const TruncatedTensor& rhs);
  TruncatedTensor& operator*=(double s);

 private:
  std::size_t index_of(const Word& w) const;

  int alphabet_;
  int depth_;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b);
TruncatedTensor operator-(TruncatedTensor a, const TruncatedTensor& b);
TruncatedTensor operator*(double s, TruncatedTensor a);

/// Concatenation product truncated at level N. Throws ShapeMismatch.
TruncatedTensor truncated_product(const TruncatedTensor& a, const TruncatedTensor& b);

/// sum_{n<=N} l^n / n!; throws NonzeroScalarPart unless the scalar part is 0.
TruncatedTensor tensor_exp(const TruncatedTensor& l);

/// sum_{n=1}^N (-1)^{n+1} (g - 1)^n / n; throws BadScalarPart unless
/// |scalar - 1| <= 1e-12.
TruncatedTensor tensor_log(const TruncatedTensor& g);

/// In place g <- g (x) exp(b) for b on level 1 (Horner per level).
void multiply_by_exp(TruncatedTensor& g, std::span<const double> letters);

/// Inverse of a group-like element: <g^{-1}, w> = (-1)^{|w|} <g, reverse(w)>.
TruncatedTensor group_inverse(const TruncatedTensor& g);

/// Euclidean norm of levels 1..N (level 0 too when include_scalar).
double norm(const TruncatedTensor& t, bool include_scalar = false);

/// Largest violation of the letter-letter shuffle identities and, for N >= 3,
/// the letter-(two letter word) ones. Zero (to rounding) for group-like g.
double shuffle_check(const TruncatedTensor& g);

/// Largest absolute coefficient difference; throws ShapeMismatch.
double max_abs_diff(const TruncatedTensor& a, const TruncatedTensor& b);

}  // namespace sigshape
