#ifndef ETAQ_COMPENSATED_HPP
#define ETAQ_COMPENSATED_HPP

#include <cmath>
#include <complex>

namespace etaq {

// Neumaier's variant of Kahan summation. The running compensation also
// catches the case where the incoming term is larger than the sum.
template <class Real>
class CompensatedSum {
public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real init) : sum_(init) {}

  CompensatedSum& operator+=(Real term) {
    const Real t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator-=(Real term) { return *this += -term; }

  Real value() const { return sum_ + comp_; }

private:
  Real sum_{0};
  Real comp_{0};
};

// Component-wise compensated accumulation of complex terms.
template <class Real>
class CompensatedSum<std::complex<Real>> {
public:
  CompensatedSum() = default;
  explicit CompensatedSum(std::complex<Real> init) : re_(init.real()), im_(init.imag()) {}

  CompensatedSum& operator+=(std::complex<Real> term) {
    re_ += term.real();
    im_ += term.imag();
    return *this;
  }

  CompensatedSum& operator-=(std::complex<Real> term) { return *this += -term; }

  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace etaq

#endif  // ETAQ_COMPENSATED_HPP
