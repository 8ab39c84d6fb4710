#include "orthoglide/analysis.hpp"

#include <cmath>
#include <limits>

namespace orthoglide::analysis {

double condition_number(const Mat3& m, CondVariant variant) {
    if (!m.finite()) throw DomainError("condition_number: non-finite matrix entries");
    const auto sv = singular_values3(m);
    if (sv[2] <= 1e-300) return std::numeric_limits<double>::infinity();
    const double ratio = sv[0] / sv[2];
    return variant == CondVariant::paper ? std::sqrt(ratio) : ratio;
}

Manipulability manipulability(const kin::JacobianSet& jac) {
    if (jac.parallel_singular || !jac.J)
        throw SingularError("manipulability unavailable: parallel-singular configuration");
    if (jac.serial_singular || !jac.J_inv)
        throw SingularError("manipulability unavailable: serial-singular configuration");

    // (J J^T)^-1 = (J^-1)^T (J^-1)
    const Mat3 g = gram(*jac.J_inv);
    const SymEigen eig = sym_eigen3(g);  // values descending
    Manipulability m;
    for (int k = 0; k < 3; ++k) {
        const double lambda = std::fmax(eig.values[2 - k], 0.0);
        m.xi[k] = std::sqrt(lambda);
        m.axes[k] = eig.vectors[2 - k];
        m.psi[k] = 1.0 / m.xi[k];
    }
    return m;
}

IsotropyReport isotropy_check(const MachineGeometry& geom, const kin::KinematicState& state,
                              double tol) {
    const kin::JacobianSet jac = kin::jacobians(geom, state);
    if (jac.serial_singular)
        throw SingularError("isotropy_check unavailable: serial-singular configuration");

    const double l2 = geom.leg_length * geom.leg_length;
    std::array<double, 3> r{};
    std::array<Vec3, 3> strut{};
    for (int i = 0; i < 3; ++i) {
        strut[i] = state.c[i] - state.b[i];
        r[i] = strut[i].norm() / jac.eta[i];
    }
    IsotropyReport rep;
    const int pair_a[3] = {0, 1, 2};
    const int pair_b[3] = {1, 2, 0};
    for (int k = 0; k < 3; ++k) {
        rep.ratio_diffs[k] = std::fabs(r[pair_a[k]] - r[pair_b[k]]);
        rep.link_dots[k] = std::fabs(strut[pair_a[k]].dot(strut[pair_b[k]])) / l2;
        rep.unit_gap[k] = std::fabs(r[k] - 1.0);
    }
    rep.max_residual = 0.0;
    for (int k = 0; k < 3; ++k) {
        rep.max_residual = std::fmax(rep.max_residual, rep.ratio_diffs[k]);
        rep.max_residual = std::fmax(rep.max_residual, rep.link_dots[k]);
        rep.max_residual = std::fmax(rep.max_residual, rep.unit_gap[k]);
    }
    rep.isotropic = rep.max_residual <= tol;
    return rep;
}

std::vector<int> Classification::serial_legs() const {
    std::vector<int> legs;
    for (int i = 0; i < 3; ++i)
        if (serial_leg[i]) legs.push_back(i + 1);
    return legs;
}

std::string Classification::str() const {
    if (regular()) return "regular";
    std::string s;
    if (serial()) {
        s = "serial_singular({";
        bool first = true;
        for (int leg : serial_legs()) {
            if (!first) s += ",";
            s += std::to_string(leg);
            first = false;
        }
        s += "})";
    }
    if (parallel) {
        if (!s.empty()) s += "+";
        s += kind == ParallelKind::parallel_links ? "parallel_singular(parallel_links)"
                                                  : "parallel_singular(coplanar)";
    }
    return s;
}

Classification classify_singularity(const kin::JacobianSet& jac, const kin::Tolerances& tol) {
    Classification c;
    const double eps_eta = tol.eps_eta(jac.leg_length);
    const double eps_det = tol.eps_det_a(jac.leg_length);
    for (int i = 0; i < 3; ++i) c.serial_leg[i] = std::fabs(jac.eta[i]) <= eps_eta;
    c.parallel = std::fabs(jac.det_A) <= eps_det;
    if (c.parallel) {
        // pairwise-parallel struts make every row cross product vanish;
        // the norms have units of length^2, hence the eps^(2/3) threshold
        const double cross_tol = std::pow(eps_det, 2.0 / 3.0);
        bool all_parallel = true;
        for (int i = 0; i < 3 && all_parallel; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (jac.A.row[i].cross(jac.A.row[j]).norm() > cross_tol) {
                    all_parallel = false;
                    break;
                }
        c.kind = all_parallel ? ParallelKind::parallel_links : ParallelKind::coplanar;
    }
    return c;
}

AnalysisReport analyze(const MachineGeometry& geom, const kin::KinematicState& state,
                       const kin::Tolerances& tol) {
    const kin::JacobianSet jac = kin::jacobians(geom, state, tol);
    AnalysisReport rep;
    rep.det_A = jac.det_A;
    rep.det_B = jac.det_B();
    rep.eta = jac.eta;
    rep.classification = classify_singularity(jac, tol);

    if (jac.J_inv) {
        const auto sv = singular_values3(*jac.J_inv);
        rep.singular_values = sv;
        if (sv[2] <= 1e-300) {
            rep.kappa_paper = std::numeric_limits<double>::infinity();
            rep.kappa_standard = std::numeric_limits<double>::infinity();
        } else {
            const double ratio = sv[0] / sv[2];
            rep.kappa_standard = ratio;
            rep.kappa_paper = std::sqrt(ratio);
        }
    }
    if (jac.J) rep.psi = singular_values3(*jac.J);
    if (jac.J && jac.J_inv) rep.ellipsoid = manipulability(jac);
    return rep;
}

}  // namespace orthoglide::analysis
