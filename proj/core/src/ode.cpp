#include "dicke/ode.hpp"

#include "dicke/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace dicke {

namespace {

constexpr int kStages = 12;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kErrorExponent = -1.0 / 8.0;

struct Tableau {
  std::array<double, kStages> c{};
  std::array<std::array<double, kStages>, kStages> a{};
  std::array<double, kStages> b{};
  std::array<double, kStages> e3{};
  std::array<double, kStages> e5{};
};

Tableau make_tableau() {
  Tableau t;
  t.c = {0.0,
         0.526001519587677318785587544488e-01,
         0.789002279381515978178381316732e-01,
         0.118350341907227396726757197510,
         0.281649658092772603273242802490,
         0.333333333333333333333333333333,
         0.25,
         0.307692307692307692307692307692,
         0.651282051282051282051282051282,
         0.6,
         0.857142857142857142857142857142,
         1.0};
  auto& a = t.a;
  a[1][0] = 5.26001519587677318785587544488e-2;

  a[2][0] = 1.97250569845378994544595329183e-2;
  a[2][1] = 5.91751709536136983633785987549e-2;

  a[3][0] = 2.95875854768068491816892993775e-2;
  a[3][2] = 8.87627564304205475450678981324e-2;

  a[4][0] = 2.41365134159266685502369798665e-1;
  a[4][2] = -8.84549479328286085344864962717e-1;
  a[4][3] = 9.24834003261792003115737966543e-1;

  a[5][0] = 3.7037037037037037037037037037e-2;
  a[5][3] = 1.70828608729473871279604482173e-1;
  a[5][4] = 1.25467687566822425016691814123e-1;

  a[6][0] = 3.7109375e-2;
  a[6][3] = 1.70252211019544039314978060272e-1;
  a[6][4] = 6.02165389804559606850219397283e-2;
  a[6][5] = -1.7578125e-2;

  a[7][0] = 3.70920001185047927108779319836e-2;
  a[7][3] = 1.70383925712239993810214054705e-1;
  a[7][4] = 1.07262030446373284651809199168e-1;
  a[7][5] = -1.53194377486244017527936158236e-2;
  a[7][6] = 8.27378916381402288758473766002e-3;

  a[8][0] = 6.24110958716075717114429577812e-1;
  a[8][3] = -3.36089262944694129406857109825;
  a[8][4] = -8.68219346841726006818189891453e-1;
  a[8][5] = 2.75920996994467083049415600797e1;
  a[8][6] = 2.01540675504778934086186788979e1;
  a[8][7] = -4.34898841810699588477366255144e1;

  a[9][0] = 4.77662536438264365890433908527e-1;
  a[9][3] = -2.48811461997166764192642586468;
  a[9][4] = -5.90290826836842996371446475743e-1;
  a[9][5] = 2.12300514481811942347288949897e1;
  a[9][6] = 1.52792336328824235832596922938e1;
  a[9][7] = -3.32882109689848629194453265587e1;
  a[9][8] = -2.03312017085086261358222928593e-2;

  a[10][0] = -9.3714243008598732571704021658e-1;
  a[10][3] = 5.18637242884406370830023853209;
  a[10][4] = 1.09143734899672957818500254654;
  a[10][5] = -8.14978701074692612513997267357;
  a[10][6] = -1.85200656599969598641566180701e1;
  a[10][7] = 2.27394870993505042818970056734e1;
  a[10][8] = 2.49360555267965238987089396762;
  a[10][9] = -3.0467644718982195003823669022;

  a[11][0] = 2.27331014751653820792359768449;
  a[11][3] = -1.05344954667372501984066689879e1;
  a[11][4] = -2.00087205822486249909675718444;
  a[11][5] = -1.79589318631187989172765950534e1;
  a[11][6] = 2.79488845294199600508499808837e1;
  a[11][7] = -2.85899827713502369474065508674;
  a[11][8] = -8.87285693353062954433549289258;
  a[11][9] = 1.23605671757943030647266201528e1;
  a[11][10] = 6.43392746015763530355970484046e-1;

  t.b = {5.42937341165687622380535766363e-2,
         0.0,
         0.0,
         0.0,
         0.0,
         4.45031289275240888144113950566,
         1.89151789931450038304281599044,
         -5.8012039600105847814672114227,
         3.1116436695781989440891606237e-1,
         -1.52160949662516078556178806805e-1,
         2.01365400804030348374776537501e-1,
         4.47106157277725905176885569043e-2};

  t.e3 = t.b;
  t.e3[0] -= 0.244094488188976377952755905512;
  t.e3[8] -= 0.733846688281611857341361741547;
  t.e3[11] -= 0.220588235294117647058823529412e-1;

  t.e5 = {0.1312004499419488073250102996e-1,
          0.0,
          0.0,
          0.0,
          0.0,
          -0.1225156446376204440720569753e+1,
          -0.4957589496572501915214079952,
          0.1664377182454986536961530415e+1,
          -0.3503288487499736816886487290,
          0.3341791187130174790297318841,
          0.8192320648511571246570742613e-1,
          -0.2235530786388629525884427845e-1};
  return t;
}

const Tableau& tableau() {
  static const Tableau t = make_tableau();
  return t;
}

double rms(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.norm() / std::sqrt(static_cast<double>(v.size()));
}

class Stepper {
 public:
  Stepper(const OdeRhs& rhs, Eigen::Index n, const OdeOptions& options, OdeStats& stats)
      : rhs_(rhs), options_(options), stats_(stats), k_(kStages, Eigen::VectorXd(n)),
        stage_y_(n), y_new_(n), f_new_(n), err3_(n), err5_(n), scale_(n) {}

  void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) {
    rhs_(t, y, out);
    ++stats_.rhs_evaluations;
  }

  // One Runge-Kutta step of size h from (t, y) with f = f(t, y) in k_[0].
  // Leaves the proposal in y_new_ and f(t + h, y_new_) in f_new_.
  void step(double t, const Eigen::VectorXd& y, double h) {
    const Tableau& tab = tableau();
    for (int s = 1; s < kStages; ++s) {
      stage_y_ = y;
      for (int j = 0; j < s; ++j) {
        if (tab.a[s][j] != 0.0) stage_y_.noalias() += (h * tab.a[s][j]) * k_[j];
      }
      eval(t + tab.c[s] * h, stage_y_, k_[s]);
    }
    y_new_ = y;
    for (int s = 0; s < kStages; ++s) {
      if (tab.b[s] != 0.0) y_new_.noalias() += (h * tab.b[s]) * k_[s];
    }
    eval(t + h, y_new_, f_new_);
  }

  double error_norm(const Eigen::VectorXd& y, double h) {
    const Tableau& tab = tableau();
    scale_ = (options_.atol + options_.rtol * y.cwiseAbs().cwiseMax(y_new_.cwiseAbs()).array())
                 .matrix();
    err3_.setZero();
    err5_.setZero();
    for (int s = 0; s < kStages; ++s) {
      if (tab.e3[s] != 0.0) err3_.noalias() += tab.e3[s] * k_[s];
      if (tab.e5[s] != 0.0) err5_.noalias() += tab.e5[s] * k_[s];
    }
    // The FSAL stage f(t+h, y_new) enters E3/E5 with zero weight.
    const double e5 = err5_.cwiseQuotient(scale_).squaredNorm();
    const double e3 = err3_.cwiseQuotient(scale_).squaredNorm();
    if (e5 == 0.0 && e3 == 0.0) return 0.0;
    return std::abs(h) * e5 / std::sqrt((e5 + 0.01 * e3) * static_cast<double>(y.size()));
  }

  double initial_step(double t0, const Eigen::VectorXd& y0, double interval) {
    if (interval == 0.0) return 0.0;
    const Eigen::VectorXd scale = (options_.atol + options_.rtol * y0.cwiseAbs().array()).matrix();
    const double d0 = rms(y0.cwiseQuotient(scale));
    const double d1 = rms(k_[0].cwiseQuotient(scale));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, interval);
    const Eigen::VectorXd y1 = y0 + h0 * k_[0];
    Eigen::VectorXd f1(y0.size());
    eval(t0 + h0, y1, f1);
    const double d2 = rms((f1 - k_[0]).cwiseQuotient(scale)) / h0;
    const double h1 = (d1 <= 1e-15 && d2 <= 1e-15)
                          ? std::max(1e-6, h0 * 1e-3)
                          : std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
    return std::min({100.0 * h0, h1, interval, options_.max_step});
  }

  std::vector<Eigen::VectorXd>& k() { return k_; }
  Eigen::VectorXd& y_new() { return y_new_; }
  Eigen::VectorXd& f_new() { return f_new_; }

 private:
  const OdeRhs& rhs_;
  const OdeOptions& options_;
  OdeStats& stats_;
  std::vector<Eigen::VectorXd> k_;
  Eigen::VectorXd stage_y_, y_new_, f_new_, err3_, err5_, scale_;
};

void check_finite(const Eigen::VectorXd& y, double t) {
  if (!y.allFinite()) {
    throw NumericalError("integrate_dop853: non-finite state at t = " + std::to_string(t));
  }
}

}  // namespace

OdeStats integrate_dop853(const OdeRhs& rhs, double t0, Eigen::VectorXd& y,
                          std::span<const double> sample_times, const OdeObserver& observer,
                          const OdeOptions& options) {
  if (!(options.rtol > 0.0) || !(options.atol > 0.0)) {
    throw ValidationError("integrate_dop853: rtol and atol must be positive");
  }
  if (options.fixed_step && !(*options.fixed_step > 0.0)) {
    throw ValidationError("integrate_dop853: fixed step must be positive");
  }
  if (!(options.max_step > 0.0)) throw ValidationError("integrate_dop853: max_step must be > 0");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double ti = sample_times[i];
    if (!std::isfinite(ti) || ti < t0 || (i > 0 && ti < sample_times[i - 1])) {
      throw ValidationError("integrate_dop853: sample times must be finite, >= t0 and sorted");
    }
  }
  OdeStats stats;
  if (sample_times.empty()) return stats;

  Stepper stepper(rhs, y.size(), options, stats);
  double t = t0;
  stepper.eval(t, y, stepper.k()[0]);
  const double span_length = sample_times.back() - t0;
  double h_abs = options.fixed_step ? *options.fixed_step
                 : options.initial_step
                     ? *options.initial_step
                     : stepper.initial_step(t0, y, span_length);
  if (!options.fixed_step && h_abs == 0.0) h_abs = options.max_step;

  for (std::size_t sample = 0; sample < sample_times.size(); ++sample) {
    const double target = sample_times[sample];
    while (t < target) {
      if (stats.accepted_steps + stats.rejected_steps >= options.max_steps) {
        throw NumericalError("integrate_dop853: exceeded max_steps at t = " + std::to_string(t));
      }
      const double min_step =
          10.0 * std::abs(std::nextafter(t, std::numeric_limits<double>::infinity()) - t);
      h_abs = std::min(h_abs, options.max_step);
      if (!options.fixed_step) h_abs = std::max(h_abs, min_step);

      bool rejected = false;
      for (;;) {
        if (h_abs < min_step && !options.fixed_step) {
          throw NumericalError("integrate_dop853: step size underflow at t = " +
                               std::to_string(t));
        }
        const double proposal = h_abs;
        double t_new = t + h_abs;
        const bool clipped = t_new >= target;
        if (clipped) t_new = target;
        const double h = t_new - t;
        stepper.step(t, y, h);

        if (options.fixed_step) {
          ++stats.accepted_steps;
          t = t_new;
          break;
        }
        const double err = stepper.error_norm(y, h);
        if (err < 1.0) {
          double factor =
              err == 0.0 ? kMaxFactor : std::min(kMaxFactor, kSafety * std::pow(err, kErrorExponent));
          if (rejected) factor = std::min(1.0, factor);
          // A step shortened to hit a sample says nothing about the step the
          // solver actually wanted; keep the unclipped proposal.
          h_abs = clipped ? std::max(proposal, h * factor) : h * factor;
          if (clipped && rejected) h_abs = std::min(h_abs, proposal);
          ++stats.accepted_steps;
          t = t_new;
          break;
        }
        h_abs = h * std::max(kMinFactor, kSafety * std::pow(err, kErrorExponent));
        rejected = true;
        ++stats.rejected_steps;
      }
      y.swap(stepper.y_new());
      stepper.k()[0].swap(stepper.f_new());
      check_finite(y, t);
    }
    if (observer) observer(sample, target, y);
  }
  return stats;
}

}  // namespace dicke
