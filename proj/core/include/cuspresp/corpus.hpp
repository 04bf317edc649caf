#pragma once

#include <memory>
#include <vector>

#include "cuspresp/spline.hpp"

namespace cuspresp {

enum class CorpusNorm { none, w1p };

/// Seeded generator options for test-function corpora: random Fourier-type
/// profiles interleaved with cusp-adapted power-law profiles.
struct CorpusOptions {
    int count = 50;
    unsigned seed = 1234;
    bool mean_zero = false;
    bool nonnegative = false;
    CorpusNorm normalize = CorpusNorm::none;
    double p = 1.5;  ///< exponent for W^{1,p} normalization
};

std::vector<SplineFunction> make_corpus(std::shared_ptr<const GradedMesh> mesh,
                                        const CorpusOptions& options);

}  // namespace cuspresp
