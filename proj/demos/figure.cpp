// Samples a Brownian bridge, excises the excursions below its two-sided
// maximum that reach 0, and writes the picture as SVG.
//
//   demo_figure [seed] [grid] > figure.svg

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "excision/excision.hpp"

int main(int argc, char** argv)
{
    using namespace excision;
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 0) : 7;
    const std::size_t grid = argc > 2 ? std::strtoull(argv[2], nullptr, 0) : 512;

    RngStream rng(seed, 0);
    Path b = sample_bridge_refined(TimeGrid(1.0, grid), rng, RefineSpec{});
    const TransformOutput out = excise_bridge(b);

    std::fprintf(stderr, "retained time %.4f, %zu excursions, %zu excised\n", out.tau, out.records.size(),
                 SvgFigure(b, out).excised_regions());
    std::cout << render_svg(b, out, "Brownian bridge with excised excursions");
    return 0;
}
