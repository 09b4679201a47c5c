// The 18-ray set in four dimensions: its inequality, the quantum operator,
// the classical maximum, and the absence of a KS value assignment.

#include <iostream>

#include <ksineq/ksineq.hpp>

int main()
{
    using namespace ksineq;

    const RaySet s = build_18ray();
    const QuadForm f = build_L4();

    const auto q = scalar_identity_check(quantum_operator(f, s));
    const BoundResult best = max_branch_bound(f);
    const auto colourings = find_ks_assignments(s);

    std::cout << s.size() << " rays in dimension " << s.dimension() << '\n'
              << "operator of " << f.name() << " = " << (q ? q->to_string() : "?") << " * I\n"
              << "classical maximum = " << best.maximum << " (" << best.evaluations << " nodes)\n"
              << "KS value assignments: " << colourings.size() << '\n';

    std::cout << "one maximiser:";
    for (const auto& [label, v] : best.argmax.values)
        if (v == 1)
            std::cout << ' ' << label;
    std::cout << '\n';
}
