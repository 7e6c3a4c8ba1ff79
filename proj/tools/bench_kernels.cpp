// Benchmark of the averaging kernels: naive per-box evaluation (the serial
// reference the tests trust) against the summed-area batch kernel, serial and
// OpenMP. Prints one table row per kernel with a cross-check against the
// reference values.

#include <chrono>
#include <cstdio>
#include <vector>

#include "movavg/averaging.hpp"
#include "movavg/cli.hpp"
#include "movavg/parallel.hpp"

using namespace movavg;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

double max_diff(const std::vector<CVal>& a, const std::vector<CVal>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

int main(int argc, char** argv) {
    std::int64_t K = argc > 1 ? std::atoll(argv[1]) : 20000;
    std::size_t samples = argc > 2 ? std::size_t(std::atoll(argv[2])) : 64;

    TorusSystem sys = TorusSystem::product_rotation({parse_theta("golden")});
    BoxFamily fam = generate_family(GeneratorSpec::parse("linear:r=1"), K);
    Observable obs = Observable::character({1});
    DPoint x = {0.37};

    std::printf("batch kernel, family (k,k) with K = %lld, character observable\n", (long long)K);
    std::printf("%-28s %12s %14s\n", "kernel", "time [ms]", "max |diff|");

    BatchOptions big;
    big.max_cells = std::size_t(1) << 26;

    auto t0 = clock_type::now();
    std::vector<CVal> naive(fam.size());
    for (std::size_t k = 0; k < fam.size(); ++k)
        naive[k] = discrete_box_average(sys, obs, x, fam.entry(k));
    double t_naive = ms_since(t0);
    std::printf("%-28s %12.1f %14s\n", "naive per-box (reference)", t_naive, "-");

    t0 = clock_type::now();
    BatchOptions serial = big;
    serial.policy = ExecPolicy::Serial;
    auto batch_serial = batch_box_averages(sys, obs, x, fam, serial);
    double t_serial = ms_since(t0);
    std::printf("%-28s %12.1f %14.3e\n", "summed-area, serial", t_serial,
                max_diff(naive, batch_serial));

    t0 = clock_type::now();
    BatchOptions par = big;
    par.policy = ExecPolicy::Parallel;
    auto batch_par = batch_box_averages(sys, obs, x, fam, par);
    double t_par = ms_since(t0);
    std::printf("%-28s %12.1f %14.3e\n", "summed-area, OpenMP", t_par,
                max_diff(batch_serial, batch_par));

    std::printf("\nconvergence experiment, %zu samples, indicator observable\n", samples);
    std::printf("%-28s %12s %14s\n", "mode", "time [ms]", "max |dev diff|");
    Observable ind = Observable::character({0});
    {
        TorusSet half(1);
        half.add_box({{ExactScalar(0), ExactScalar(Rational(1, 2))}});
        ind = Observable::indicator(half);
    }
    ConvergenceOptions copts;
    copts.samples = samples;
    copts.seed = 1;
    copts.condition_certified = true;

    copts.policy = ExecPolicy::Serial;
    t0 = clock_type::now();
    ConvergenceReport serial_rep = convergence_experiment(sys, ind, fam, copts);
    double t_cs = ms_since(t0);
    std::printf("%-28s %12.1f %14s\n", "samples, serial", t_cs, "-");

    copts.policy = ExecPolicy::Parallel;
    t0 = clock_type::now();
    ConvergenceReport par_rep = convergence_experiment(sys, ind, fam, copts);
    double t_cp = ms_since(t0);
    double dmax = 0;
    for (std::size_t k = 0; k < serial_rep.deviation.size(); ++k)
        dmax = std::max(dmax, std::abs(serial_rep.deviation[k] - par_rep.deviation[k]));
    std::printf("%-28s %12.1f %14.3e\n", "samples, OpenMP", t_cp, dmax);
    std::printf("\nthreads available: %d\n", max_threads());
    return 0;
}
