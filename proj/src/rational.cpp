// Copyright 2026 The pairsketch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pairsketch/rational.hpp"

#include <cmath>

#include "pairsketch/errors.hpp"

namespace pairsketch {

Rational exact_rational(double x) {
    if (!std::isfinite(x)) {
        throw InvalidParamsError("cannot convert a non-finite value to a rational");
    }
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // mant * 2^53 is an integer for every double.
    auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    Rational r(scaled);
    exp -= 53;
    if (exp >= 0) {
        r *= Rational(BigInt(1) << exp);
    } else {
        r /= Rational(BigInt(1) << -exp);
    }
    return r;
}

}  // namespace pairsketch
