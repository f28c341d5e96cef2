#include "adukf/evaluation.hpp"

#include <stdexcept>

#include "adukf/errors.hpp"

namespace adukf::eval {

double nrmse(std::span<const double> est, std::span<const double> truth) {
    if (est.size() != truth.size()) {
        throw std::invalid_argument("nrmse: series lengths differ");
    }
    double err = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double d = est[i] - truth[i];
        err += d * d;
        energy += truth[i] * truth[i];
    }
    if (energy == 0.0) {
        throw ZeroNormalizer("nrmse: truth series is identically zero");
    }
    return err / energy;
}

Vector per_state_nrmse(const std::vector<Vector>& est, const std::vector<Vector>& truth) {
    if (est.size() != truth.size() || est.empty()) {
        throw std::invalid_argument("per_state_nrmse: trajectories differ in length or are empty");
    }
    const Index n = truth.front().size();
    Vector out(n);
    std::vector<double> e(est.size());
    std::vector<double> t(truth.size());
    for (Index i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < est.size(); ++k) {
            e[k] = est[k](i);
            t[k] = truth[k](i);
        }
        out(i) = nrmse(e, t);
    }
    return out;
}

double group_nrmse(const std::vector<Vector>& est, const std::vector<Vector>& truth,
                   std::span<const Index> indices) {
    if (indices.empty()) {
        throw std::invalid_argument("group_nrmse: empty index set");
    }
    const Vector all = per_state_nrmse(est, truth);
    double sum = 0.0;
    for (Index i : indices) {
        if (i < 0 || i >= all.size()) {
            throw std::invalid_argument("group_nrmse: state index out of range");
        }
        sum += all(i);
    }
    return sum / static_cast<double>(indices.size());
}

}  // namespace adukf::eval
