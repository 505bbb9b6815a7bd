#ifndef ETAQ_ETAQ_HPP
#define ETAQ_ETAQ_HPP

#include "etaq/compensated.hpp"
#include "etaq/errors.hpp"
#include "etaq/limits.hpp"
#include "etaq/qset.hpp"
#include "etaq/rng.hpp"
#include "etaq/search.hpp"
#include "etaq/series.hpp"
#include "etaq/verify.hpp"
#include "etaq/zeros.hpp"

namespace etaq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace etaq

#endif  // ETAQ_ETAQ_HPP
