#ifndef MORREYLAB_WEIGHT_CLASS_HPP
#define MORREYLAB_WEIGHT_CLASS_HPP

// Weight-class constants and condition checks: A_q, A_1, A_infty ladder,
// reverse Holder, doubling, B_{p,q}, the weighted integral condition and its
// self-improved form, Tanaka-style conditions, and the analytic power-weight
// classifier.

#include <map>

#include "morreylab/core.hpp"

namespace morreylab {

struct CandidateB;  // content.hpp

// [w]_{A_q} = max over dyadic Q of (w(Q)/|Q|) ((1/|Q|) int_Q w^{-1/(q-1)})^{q-1}
double aq_constant(const Weight& w, double q);

// [w]_{A_1} = max over cells of M(density)/density
double a1_constant(const Weight& w);

// ladder value at q = 64; the full ladder is in WeightReport
double ainf_estimate(const Weight& w);

// largest eps on a bisection grid (tolerance 1e-4) with
// ((1/|Q|) int_Q w^{1+eps})^{1/(1+eps)} <= 2 w(Q)/|Q| for every dyadic Q
double reverse_holder_epsilon(const Weight& w);

// max over dyadic Q with aligned in-range 2Q of w(2Q)/w(Q)
double doubling_constant(const Weight& w);

// best constant of Phi(Q) <= C Phi(Q0) over dyadic Q inside Q0
double bpq_check(const Weight& w, double p, double q);

// discrete weighted integral condition constant:
// max over Q of Phi(Q) sum_{k>=1} 1/Phi(Q^{(k)})
double weighted_integral_check(const Weight& w, double p, double q);

// self-improved form with factor k^delta (delta = 0 recovers the plain check,
// delta = 1 the log-weighted constant)
double nakai_self_improve_check(const Weight& w, double p, double q, double delta);

struct PhiGrowth {
    bool holds = false;       // 2 Phi(Q) <= Phi(Q^{(m)}) for all Q with ancestors
    double worst_ratio = 0.0; // max of 2 Phi(Q) / Phi(Q^{(m)})
    bool degenerate = false;  // no cube has an m-th ancestor
};

// c = 2^m realized by m-th dyadic ancestors
PhiGrowth phi_growth_check(const Weight& w, double p, double q, int c);

// max over dyadic Q of (1/|Q|) ||w^{1/q} chi_Q||_{M^p_q(dx,dx)}
//                      * block_norm_upper(w^{-1/q} chi_Q)
double condition_151221_1_check(const Weight& w, double p, double q,
                                const std::vector<CandidateB>& candidates);

enum class TanakaVariant { c, d };

// variant c: max over Q0 of max_{Q subset Q0} (1/sigma(Q)) int_Q (M[sigma chi_Q])^q dw
//            / l(Q0)^{n(1-q/p)}, sigma = (b w)^{-q'/q}
// variant d: same normalization with the (bw)^{-aq'/q} average expression
double tanaka_condition_check(const Weight& w, double p, double q, const CandidateB& b,
                              TanakaVariant variant, double a);

struct PowerWeightFlags {
    bool locally_integrable = false;  // alpha > -n
    bool in_aq = false;               // -n < alpha < n(q-1)
    bool hlm = false;                 // -qn/p <= alpha < n(q - q/p)
    bool wic = false;                 // alpha > -qn/p
    bool sio_bounded = false;         // -qn/p < alpha < n(q - q/p)
};

PowerWeightFlags power_weight_classifier(double alpha, double p, double q, int n);

struct WeightReport {
    std::map<double, double> a_q_constants;  // ladder q in {2,4,8,16,32,64}
    double a1_const = 0.0;
    double a_inf_est = 0.0;
    double rh_epsilon = 0.0;
    double doubling_const = 0.0;
    double bpq_const = 0.0;
    double wic_const = 0.0;
    double phi_growth_c = 0.0;  // worst ratio of the c=4 growth check; 0 if degenerate

    std::string to_json() const;
};

WeightReport weight_report(const Weight& w, double p, double q);

}  // namespace morreylab

#endif
