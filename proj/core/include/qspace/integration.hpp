#pragma once

#include "qspace/calculus.hpp"

namespace qspace {

struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Jackson antiderivative: D^{-1} x^n = x^{n+1}/[[n+1]]_{q^k}; inverts
/// jackson_D on polynomials.  The time variable integrates classically.
CPoly antiderivative(long base_q_pow, Idx var, const CPoly& f);

/// Operator representation of (d_A)^{-1}: closed forms for the +,3 directions,
/// the printed terminating correction series for the - direction, an ordinary
/// integral for the time direction.  Left inverse of partial(fam, a, Left, .).
CPoly inverse_partial(DFamily fam, Idx a, const CPoly& f);

/// The k-th term of the correction series for (d_-)^{-1} (plain family) or
/// (dhat_+)^{-1} (hatted family), as printed: prefactor q^{±2k(k+1)}, k
/// bracket applications, innermost antiderivative, x3 argument scaling
/// q^{∓2(k+1)}.  Exposed for the term-extraction test.
CPoly inverse_partial_series_term(DFamily fam, int k, const CPoly& f);

}  // namespace qspace
