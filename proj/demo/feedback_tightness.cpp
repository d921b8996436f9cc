// Follows a qubit under homodyne feedback and prints how tight the three
// uncertainty relations are along the way, for sigma_x and sigma_z.

#include <cstdio>
#include <numbers>
#include <optional>

#include "varunc/varunc.hpp"

namespace {

void print_ratio(const std::optional<double>& v) {
    if (v) std::printf(" %10.6f", *v);
    else std::printf(" %10s", "-");
}

}  // namespace

int main() {
    using namespace varunc;
    const PauliObservable a = PauliObservable::sigma_x();
    const PauliObservable b = PauliObservable::sigma_z();

    for (const double lambda : {0.3, 1.0}) {
        const FeedbackParams p{0.0, lambda, std::numbers::pi / 4};
        const Trajectory traj = integrate(p, 3.0, 1e-3);
        std::printf("lambda = %.1f, alpha = pi/4\n", lambda);
        std::printf("%6s %10s %10s %10s %10s %10s\n", "t", "rho11", "M", "Ti1", "Ti2", "Ti3");
        for (std::size_t k = 300; k < traj.size(); k += 300) {
            const QubitState& s = traj.states[k];
            std::printf("%6.2f %10.6f %10.6f", traj.times[k], s.excited_population(), mixedness(s));
            print_ratio(ti1(s, a, b));
            print_ratio(ti2(s, a, b));
            print_ratio(ti3(s, a, b));
            std::printf("\n");
        }
        std::printf("steady rho11 = %.6f\n\n", steady_state(p).excited_population());
    }
}
