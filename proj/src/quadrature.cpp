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

#include "rydsrc/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "rydsrc/units.hpp"

namespace rydsrc {

namespace {

// P_n(x) and P_{n-1}(x) by the three-term recurrence.
void legendre_pair(std::size_t n, double x, double& pn, double& pn1)
{
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
    }
    pn = p1;
    pn1 = p0;
}

} // namespace

QuadratureRule gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 2.0);
    if (n == 1)
        return rule;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        double pn = 0.0, pn1 = 0.0, dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            legendre_pair(n, x, pn, pn1);
            dp = dn * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        legendre_pair(n, x, pn, pn1);
        dp = dn * (x * pn - pn1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b)
{
    auto rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals)
{
    if (intervals < 2)
        intervals = 2;
    if (intervals % 2 == 1)
        ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i)
        sum += f(a + h * static_cast<double>(i)) * ((i % 2 == 1) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

} // namespace rydsrc
