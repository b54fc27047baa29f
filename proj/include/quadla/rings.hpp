#pragma once

#include "quadla/rings/concepts.hpp"
#include "quadla/rings/gaussian.hpp"
#include "quadla/rings/polynomial.hpp"
#include "quadla/rings/prime_field.hpp"
#include "quadla/rings/quaternion.hpp"
#include "quadla/rings/rational.hpp"
#include "quadla/rings/rational_function.hpp"

namespace quadla {

using RationalFunctionQ = RationalFunction<Rational>;
using RationalFunctionGF = RationalFunction<PrimeField>;

/// Field of rational functions over the field of `ctx`, in variable `var`.
template <Ring K>
typename RationalFunction<K>::Context function_field(const typename K::context_type& ctx, char var = 't') {
    return {ctx, var};
}

} // namespace quadla
