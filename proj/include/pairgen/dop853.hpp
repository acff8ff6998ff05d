#pragma once

// Explicit Dormand-Prince 8(5,3) integrator for small fixed-size systems.
//
// Coefficients and the error estimator follow Hairer & Wanner's DOP853. The
// step controller uses the Lund (PI) stabilization with exponent `beta`.
// Dense output is the 7th-order continuous extension; its three extra stages
// are only computed on steps where an observer asks for it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace pairgen::ode {

namespace dop853_coeffs {
// clang-format off
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;
// clang-format on
} // namespace dop853_coeffs

struct StepControl {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    long max_steps = 2'000'000;
    double initial_step = 0.0; ///< 0 selects a step from the tolerances
    double max_step = std::numeric_limits<double>::infinity();
    double safety = 0.9;
    double min_factor = 1.0 / 3.0; ///< lower bound on h_new / h
    double max_factor = 6.0;       ///< upper bound on h_new / h
    double beta = 0.04;            ///< PI (Lund) stabilization exponent
};

enum class Status { Success, StepBudgetExhausted, StepUnderflow, NonFinite };

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
};

struct Outcome {
    Status status = Status::Success;
    double t_reached = 0.0;
    Stats stats;
};

/// Integrates y' = rhs(t, y) for an N-component state held in a std::array.
///
/// `Rhs` is callable as `void(double t, const State &y, State &dydt)`.
template <std::size_t N> class Dop853 {
  public:
    using State = std::array<double, N>;

    explicit Dop853(StepControl control = {}) : control_(control) {}

    const StepControl &control() const noexcept { return control_; }

    /// Read access to the most recent accepted step.
    class StepView {
      public:
        double t_old() const noexcept { return owner_->t_old_; }
        double t_new() const noexcept { return owner_->t_; }
        const State &y_new() const noexcept { return owner_->y_; }

        /// Continuous extension at t in [t_old, t_new].
        State dense(double t) const { return eval_(owner_, rhs_, t); }

      private:
        friend class Dop853;
        using Eval = State (*)(Dop853 *, const void *, double);
        StepView(Dop853 *owner, const void *rhs, Eval eval) : owner_(owner), rhs_(rhs), eval_(eval) {}
        Dop853 *owner_;
        const void *rhs_;
        Eval eval_;
    };

    /// Integrates from t0 to t1, overwriting `y`. `observer(const StepView &)`
    /// is called after every accepted step.
    template <class Rhs, class Observer>
    Outcome integrate(const Rhs &rhs, double t0, double t1, State &y, Observer &&observer) {
        using namespace dop853_coeffs;
        const double direction = t1 >= t0 ? 1.0 : -1.0;
        const double span = std::abs(t1 - t0);
        const double hmax = std::min(control_.max_step, span);
        const double expo1 = 1.0 / 8.0 - control_.beta * 0.2;
        const double facc1 = 1.0 / control_.min_factor;
        const double facc2 = 1.0 / control_.max_factor;
        constexpr double uround = std::numeric_limits<double>::epsilon();

        Outcome out;
        t_ = t0;
        y_ = y;
        dense_ready_ = false;
        if (span == 0.0) {
            out.t_reached = t0;
            return out;
        }

        rhs(t_, y_, k1_);
        ++out.stats.evaluations;
        double h = control_.initial_step > 0.0 ? control_.initial_step : initial_step(rhs, hmax, direction, out);
        h = std::min(std::abs(h), hmax);
        double facold = 1e-4;
        bool last = false;
        bool reject = false;
        long steps = 0;

        State ytmp;
        while (true) {
            if (steps >= control_.max_steps) {
                out.status = Status::StepBudgetExhausted;
                break;
            }
            if (0.1 * h <= std::abs(t_) * uround) {
                out.status = Status::StepUnderflow;
                break;
            }
            if ((t_ + 1.01 * h * direction - t1) * direction > 0.0) {
                h = std::abs(t1 - t_);
                last = true;
            }
            ++steps;
            const double hs = h * direction;

            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * a21 * k1_[i];
            rhs(t_ + c2 * hs, ytmp, k2_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a31 * k1_[i] + a32 * k2_[i]);
            rhs(t_ + c3 * hs, ytmp, k3_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a41 * k1_[i] + a43 * k3_[i]);
            rhs(t_ + c4 * hs, ytmp, k4_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a51 * k1_[i] + a53 * k3_[i] + a54 * k4_[i]);
            rhs(t_ + c5 * hs, ytmp, k5_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a61 * k1_[i] + a64 * k4_[i] + a65 * k5_[i]);
            rhs(t_ + c6 * hs, ytmp, k6_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a71 * k1_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
            rhs(t_ + c7 * hs, ytmp, k7_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a81 * k1_[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] + a87 * k7_[i]);
            rhs(t_ + c8 * hs, ytmp, k8_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a91 * k1_[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] + a97 * k7_[i] +
                                        a98 * k8_[i]);
            rhs(t_ + c9 * hs, ytmp, k9_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a101 * k1_[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] +
                                        a107 * k7_[i] + a108 * k8_[i] + a109 * k9_[i]);
            rhs(t_ + c10 * hs, ytmp, k10_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a111 * k1_[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] +
                                        a117 * k7_[i] + a118 * k8_[i] + a119 * k9_[i] + a1110 * k10_[i]);
            rhs(t_ + c11 * hs, ytmp, k11_);
            const double t_next = t_ + hs;
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_[i] + hs * (a121 * k1_[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] +
                                        a127 * k7_[i] + a128 * k8_[i] + a129 * k9_[i] + a1210 * k10_[i] +
                                        a1211 * k11_[i]);
            rhs(t_next, ytmp, k12_);
            out.stats.evaluations += 11;

            double err = 0.0;
            double err2 = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < N; ++i) {
                const double slope = b1 * k1_[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] +
                                     b10 * k10_[i] + b11 * k11_[i] + b12 * k12_[i];
                ynew_[i] = y_[i] + hs * slope;
                finite = finite && std::isfinite(ynew_[i]);
                const double sk = control_.abs_tol + control_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
                const double e3 = slope - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k12_[i];
                const double e5 = er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] +
                                  er10 * k10_[i] + er11 * k11_[i] + er12 * k12_[i];
                err2 += (e3 / sk) * (e3 / sk);
                err += (e5 / sk) * (e5 / sk);
            }
            if (!finite || !std::isfinite(err) || !std::isfinite(err2)) {
                out.status = Status::NonFinite;
                break;
            }
            double deno = err + 0.01 * err2;
            if (deno <= 0.0)
                deno = 1.0;
            err = h * err * std::sqrt(1.0 / (static_cast<double>(N) * deno));

            const double fac11 = std::pow(err, expo1);
            double fac = fac11 / std::pow(facold, control_.beta);
            fac = std::max(facc2, std::min(facc1, fac / control_.safety));
            double hnew = h / fac;

            if (err <= 1.0) {
                facold = std::max(err, 1e-4);
                ++out.stats.accepted;
                rhs(t_next, ynew_, knew_);
                ++out.stats.evaluations;
                y_old_ = y_;
                k1_old_ = k1_;
                t_old_ = t_;
                h_last_ = hs;
                y_ = ynew_;
                k1_ = knew_;
                t_ = last ? t1 : t_next;
                dense_ready_ = false;
                if (std::abs(hnew) > hmax)
                    hnew = hmax;
                if (reject)
                    hnew = std::min(hnew, h);
                reject = false;

                observer(StepView(this, &rhs, &erased_dense<Rhs>));
                if (last)
                    break;
            } else {
                hnew = h / std::min(facc1, fac11 / control_.safety);
                reject = true;
                last = false;
                ++out.stats.rejected;
            }
            h = hnew;
        }
        out.t_reached = t_;
        y = y_;
        return out;
    }

    template <class Rhs> Outcome integrate(const Rhs &rhs, double t0, double t1, State &y) {
        return integrate(rhs, t0, t1, y, [](const StepView &) {});
    }

  private:
    template <class Rhs> static State erased_dense(Dop853 *self, const void *rhs, double t) {
        return self->dense_at(*static_cast<const Rhs *>(rhs), t);
    }

    template <class Rhs> double initial_step(const Rhs &rhs, double hmax, double direction, Outcome &out) {
        // Hairer's HINIT with order 8.
        double dnf = 0.0;
        double dny = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
            dnf += (k1_[i] / sk) * (k1_[i] / sk);
            dny += (y_[i] / sk) * (y_[i] / sk);
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, hmax);
        State y1;
        for (std::size_t i = 0; i < N; ++i)
            y1[i] = y_[i] + h * direction * k1_[i];
        rhs(t_ + h * direction, y1, k2_);
        ++out.stats.evaluations;
        double der2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
            const double d = (k2_[i] - k1_[i]) / sk;
            der2 += d * d;
        }
        der2 = std::sqrt(der2) / h;
        const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
        return std::min({100.0 * std::abs(h), h1, hmax});
    }

    template <class Rhs> State dense_at(const Rhs &rhs, double t) {
        using namespace dop853_coeffs;
        if (!dense_ready_) {
            const double h = h_last_;
            State ytmp;
            for (std::size_t i = 0; i < N; ++i) {
                const double ydiff = y_[i] - y_old_[i];
                const double bspl = h * k1_old_[i] - ydiff;
                rc_[0][i] = y_old_[i];
                rc_[1][i] = ydiff;
                rc_[2][i] = bspl;
                rc_[3][i] = ydiff - h * k1_[i] - bspl;
                rc_[4][i] = d41 * k1_old_[i] + d46 * k6_[i] + d47 * k7_[i] + d48 * k8_[i] + d49 * k9_[i] +
                            d410 * k10_[i] + d411 * k11_[i] + d412 * k12_[i];
                rc_[5][i] = d51 * k1_old_[i] + d56 * k6_[i] + d57 * k7_[i] + d58 * k8_[i] + d59 * k9_[i] +
                            d510 * k10_[i] + d511 * k11_[i] + d512 * k12_[i];
                rc_[6][i] = d61 * k1_old_[i] + d66 * k6_[i] + d67 * k7_[i] + d68 * k8_[i] + d69 * k9_[i] +
                            d610 * k10_[i] + d611 * k11_[i] + d612 * k12_[i];
                rc_[7][i] = d71 * k1_old_[i] + d76 * k6_[i] + d77 * k7_[i] + d78 * k8_[i] + d79 * k9_[i] +
                            d710 * k10_[i] + d711 * k11_[i] + d712 * k12_[i];
            }
            // k1_ holds f(t_new, y_new), the "k4" of the reference code.
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_old_[i] + h * (a141 * k1_old_[i] + a147 * k7_[i] + a148 * k8_[i] + a149 * k9_[i] +
                                           a1410 * k10_[i] + a1411 * k11_[i] + a1412 * k12_[i] + a1413 * k1_[i]);
            rhs(t_old_ + c14 * h, ytmp, x14_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_old_[i] + h * (a151 * k1_old_[i] + a156 * k6_[i] + a157 * k7_[i] + a158 * k8_[i] +
                                           a1511 * k11_[i] + a1512 * k12_[i] + a1513 * k1_[i] + a1514 * x14_[i]);
            rhs(t_old_ + c15 * h, ytmp, x15_);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y_old_[i] + h * (a161 * k1_old_[i] + a166 * k6_[i] + a167 * k7_[i] + a168 * k8_[i] +
                                           a169 * k9_[i] + a1613 * k1_[i] + a1614 * x14_[i] + a1615 * x15_[i]);
            rhs(t_old_ + c16 * h, ytmp, x16_);
            for (std::size_t i = 0; i < N; ++i) {
                rc_[4][i] = h * (rc_[4][i] + d413 * k1_[i] + d414 * x14_[i] + d415 * x15_[i] + d416 * x16_[i]);
                rc_[5][i] = h * (rc_[5][i] + d513 * k1_[i] + d514 * x14_[i] + d515 * x15_[i] + d516 * x16_[i]);
                rc_[6][i] = h * (rc_[6][i] + d613 * k1_[i] + d614 * x14_[i] + d615 * x15_[i] + d616 * x16_[i]);
                rc_[7][i] = h * (rc_[7][i] + d713 * k1_[i] + d714 * x14_[i] + d715 * x15_[i] + d716 * x16_[i]);
            }
            dense_ready_ = true;
        }
        if (t == t_)
            return y_;
        const double s = (t - t_old_) / h_last_;
        const double s1 = 1.0 - s;
        State out;
        for (std::size_t i = 0; i < N; ++i) {
            double acc = rc_[6][i] + s * rc_[7][i];
            acc = rc_[5][i] + s1 * acc;
            acc = rc_[4][i] + s * acc;
            acc = rc_[3][i] + s1 * acc;
            acc = rc_[2][i] + s * acc;
            acc = rc_[1][i] + s1 * acc;
            out[i] = rc_[0][i] + s * acc;
        }
        return out;
    }

    StepControl control_;
    double t_ = 0.0;
    double t_old_ = 0.0;
    double h_last_ = 0.0;
    bool dense_ready_ = false;
    State y_{}, y_old_{}, ynew_{};
    State k1_{}, k1_old_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, k8_{}, k9_{}, k10_{}, k11_{}, k12_{}, knew_{};
    State x14_{}, x15_{}, x16_{};
    std::array<State, 8> rc_{};
};

} // namespace pairgen::ode
