#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {
namespace normdiag {

struct WeightSpec {
  double exponent = 0.0;       // power p of <x> = sqrt(1+x^2)
  double holder_alpha = 0.5;   // alpha in (0,1)
  int boundary_power = 0;      // k in the d_{x,y}^{k+alpha} weight
};

// max over grid of <x>^p |u| (strip fields weigh the x coordinate)
double weighted_sup_norm(const StripField& u, double p);
double weighted_sup_norm(const std::vector<double>& x,
                         const std::vector<double>& u, double p);

// discrete interior Holder seminorm
//   sup d_{x,y}^{k+alpha} |u(x)-u(y)| / |x-y|^alpha
// over node pairs within a window of kHolderWindow indices.
inline constexpr int kHolderWindow = 32;
double weighted_holder_seminorm(const std::vector<double>& x,
                                const std::vector<double>& u,
                                const WeightSpec& spec,
                                int window = kHolderWindow);
double weighted_holder_seminorm(const StripField& u, const WeightSpec& spec,
                                int window = kHolderWindow);

enum class DecayKind { Linear, Power, Exponential };

struct DecayFit {
  DecayKind kind = DecayKind::Linear;
  double rate = 0.0;       // slope b of the winning model
  double residual = 0.0;   // RMS misfit of the winning model
};

// classify u on r >= 2 among u ~ a + b r, |u| ~ a r^b, |u| ~ a e^{b r}
DecayFit decay_fit(const std::vector<double>& r, const std::vector<double>& u);

// second-order operator L u = a^{ij} D_ij u + b^i D_i u + c u on a 2D grid,
// coefficients stored pointwise (a symmetric: a11, a12, a22)
struct OperatorCoefficients {
  std::vector<double> a11, a12, a22;
  std::vector<double> b1, b2;
  std::vector<double> c;
};

// Pointwise data needed by the weighted transform: the weight, its first
// and second derivatives.
struct WeightData {
  std::vector<double> w;
  std::vector<double> w1, w2;    // dw/dx1, dw/dx2
  std::vector<double> w11, w12, w22;
};

// Coefficients of the conjugated operator with L~(w u) = w (L u):
//   a~ = a,  b~^j = b^j - 2 a^{ij} d_i log w,
//   c~ = 2 a^{ij} d_i log w d_j log w - a^{ij} (d_i d_j w)/w
//        - b^j d_j log w + c.
OperatorCoefficients transform_weighted_operator(const OperatorCoefficients& L,
                                                 const WeightData& w);

struct MembershipComponent {
  std::string name;
  double value = 0.0;
  double value_grown = 0.0;  // same proxy after X -> 1.25 X
  bool stable = false;
};

struct MembershipReport {
  std::vector<MembershipComponent> components;
  bool passes = false;
};

enum class SpaceKind { X2d, Y2d, X4dRadial, Y4dRadial };

// weight exponents are the paper's defaults but overridable
struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::X2d;
  double field_exponent = -0.5;  // on the field itself
  double lap_exponent = 1.5;     // on its Laplacian
};

// Discrete membership proxies for a strip field sampled by an evaluator
// over arbitrary truncations (so stability under X -> 1.25 X is testable).
// The evaluator returns the field value at (x, y).
MembershipReport membership_check(
    const std::function<double(double, double)>& field, double X, double lambda,
    int nx, int ny, const SpaceDescriptor& space);

// Operator-identity oracle: random smooth (a, b, c, w, u) with analytic
// derivatives; returns the max over samples of |L~(w u) - w (L u)|.
double transform_identity_check(unsigned long long seed, int n_samples);

}  // namespace normdiag
}  // namespace liouville
