// Conditions on a truncated lattice, then interpolation of alternating values.

#include <cmath>
#include <cstdio>
#include <vector>

#include <bernstein/bernstein.hpp>

int main()
{
    using namespace bernstein;

    std::vector<complex_t> pts;
    for (int k = -200; k <= 200; ++k) {
        pts.emplace_back(k, 1.0);
    }
    const discrete_sequence lattice(pts, std::hypot(200.0, 1.0), "lattice");

    const auto rep = analyze(lattice);
    std::printf("balayage sup      %.6f at x = %.4f\n", rep.balayage.sup, rep.balayage.argmax);
    std::printf("carleson sup      %.6f\n", rep.carleson.sup);
    std::printf("local counting C  %.6f\n", rep.local_counting.c_estimate);
    std::printf("separation eps    %.6f (alpha = 1)\n", rep.separation.epsilon);

    std::vector<complex_t> nodes, values;
    for (int k = -20; k <= 20; ++k) {
        nodes.emplace_back(k, 1.0);
        values.emplace_back(k % 2 == 0 ? 1.0 : -1.0, 0.0);
    }
    const auto F = generating_function::shifted_sine(complex_t(0, 1), 1.0);
    const interpolant f(F, discrete_sequence(nodes), values, weight_parameters(8, 1, 0, 0));
    for (double x : {-0.5, 0.0, 0.5, 1.0}) {
        const auto v = interpolant_eval(f, complex_t(x, 1.0)).value;
        std::printf("f(%5.2f + i) = %+.10f %+.10fi\n", x, v.real(), v.imag());
    }
}
