// Reads out the mixedness of a few qubit states two ways: from exact moments
// of a non-commuting observable pair, and from simulated measurement counts.

#include <cstdio>

#include "varunc/varunc.hpp"

int main() {
    using namespace varunc;
    const PauliObservable a = PauliObservable::sigma_x();
    const PauliObservable b = 0.5 * PauliObservable::sigma_y() + PauliObservable::sigma_z();

    const BlochVector states[] = {{0, 0, 0}, {0.6, 0, 0}, {0.2, -0.3, 0.5}, {0, 0, 1}};
    std::printf("%-22s %10s %10s %14s %12s\n", "bloch", "M", "exact", "from 1e5 shots", "std error");
    for (const auto& p : states) {
        const QubitState s(p);
        const MixednessEstimate e =
            estimate_mixedness_from_counts(simulate_estimator_counts(s, a, b, 100000, 1));
        char label[32];
        std::snprintf(label, sizeof label, "(%.1f, %.1f, %.1f)", p.px, p.py, p.pz);
        std::printf("%-22s %10.6f %10.6f %14.6f %12.2e\n", label, mixedness(s),
                    estimate_mixedness(s, a, b), e.estimate, e.std_error);
    }

    const QubitState s({0.2, -0.3, 0.5});
    const RelationReport r = relation_report(s, a, b);
    std::printf("\nVar(A)Var(B) = %.6f\n", r.product);
    std::printf("  commutator     %.6f\n", r.rur_bound);
    std::printf("  covariance^2   %.6f\n", r.sur_bound - r.rur_bound);
    std::printf("  mixedness part %.6f\n", r.remainder);
    std::printf("  residual       %.1e\n", r.equality_residual);
}
