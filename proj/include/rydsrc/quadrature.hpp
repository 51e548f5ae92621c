// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rydsrc {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
QuadratureRule gauss_legendre(std::size_t n);

/// Same rule mapped affinely onto [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// Composite Simpson rule on [a, b] with an even number of intervals
/// (rounded up).
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals);

} // namespace rydsrc
