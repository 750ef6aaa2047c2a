// Kac's identity, twice: the mean first-return time to a set B equals
// 1/mu(B), so the return-time integral over B is exactly 1. Estimated here
// for cylinders of Bernoulli shifts and for [1/2, 1] under the doubling map.

#include <cstdio>

#include "ergokit/blocks.hpp"

using namespace ergokit;

int main() {
    const u64 samples = 400000, seed = 7;

    std::printf("Bernoulli(p) shift, B = [symbol 1 at coordinate 1], %llu samples\n",
                (unsigned long long)samples);
    std::printf("%6s %14s %14s %12s\n", "p", "mean return", "integral", "exact 1/p");
    for (double p : {0.15, 0.3, 0.5, 0.7, 0.9}) {
        auto rep = kac_bernoulli_cylinder(p, samples, seed);
        double mean_return = rep.integral * double(rep.samples) / double(rep.returns);
        std::printf("%6.2f %14.5f %14.5f %12.5f\n", p, mean_return, rep.integral, 1.0 / p);
    }

    auto dbl = kac_doubling_half(samples, seed);
    std::printf("\ndoubling map x -> 2x mod 1, B = [1/2, 1]\n");
    std::printf("  returns %llu, integral %.5f +- %.5f (exact 1)\n",
                (unsigned long long)dbl.returns, dbl.integral, dbl.stderr_);
    std::printf("  mean return over B: %.5f (exact 2 = 1/leb(B))\n",
                dbl.integral * double(dbl.samples) / double(dbl.returns));
    return 0;
}
