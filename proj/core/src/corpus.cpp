#include "cuspresp/corpus.hpp"

#include <cmath>
#include <random>

#include "cuspresp/norms.hpp"

namespace cuspresp {

std::vector<SplineFunction> make_corpus(std::shared_ptr<const GradedMesh> mesh,
                                        const CorpusOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double c = mesh->cusp();

    NormConfig cfg;
    cfg.p = options.p;

    std::vector<SplineFunction> corpus;
    corpus.reserve(options.count);
    for (int idx = 0; idx < options.count; ++idx) {
        std::vector<double> samples(mesh->nodes().size(), 0.0);
        const int kind = idx % 3;
        if (kind < 2) {
            // Fourier-type profile with decaying mode amplitudes.
            double a0 = gauss(rng);
            double am[8], bm[8];
            for (int m = 0; m < 8; ++m) {
                am[m] = gauss(rng) / ((m + 1.0) * (m + 1.0));
                bm[m] = gauss(rng) / ((m + 1.0) * (m + 1.0));
            }
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const double x = mesh->nodes()[i];
                double v = a0;
                for (int m = 0; m < 8; ++m) {
                    v += am[m] * std::cos(2.0 * M_PI * (m + 1) * x);
                    v += bm[m] * std::sin(2.0 * M_PI * (m + 1) * x);
                }
                samples[i] = v;
            }
        } else {
            // Cusp-adapted kink |x-c|^gamma modulated by a smooth factor.
            const double gamma = 0.6 + 1.2 * unif(rng);
            const double amp = 0.5 + unif(rng);
            const int nu = 1 + static_cast<int>(3.0 * unif(rng));
            const double phase = 2.0 * M_PI * unif(rng);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const double x = mesh->nodes()[i];
                samples[i] = amp * std::pow(std::fabs(x - c), gamma) *
                             (1.0 + 0.5 * std::sin(2.0 * M_PI * nu * x + phase));
            }
        }

        SplineFunction f = SplineFunction::interpolate_c2(mesh, samples);
        if (options.nonnegative) {
            double lo = 0.0;
            for (int i = 0; i <= 512; ++i)
                lo = std::min(lo, f.value(i / 512.0));
            f.add_constant(-lo + 0.05);
        }
        if (options.mean_zero)
            f.add_constant(-f.integral());
        if (options.normalize == CorpusNorm::w1p) {
            const double n = sobolev_norm(f, cfg, 1);
            if (n > 1e-12)
                f *= 1.0 / n;
        }
        corpus.push_back(std::move(f));
    }
    return corpus;
}

}  // namespace cuspresp
