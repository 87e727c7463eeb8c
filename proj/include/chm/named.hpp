#pragma once

// Individually named complex Hadamard matrices: closed forms where the
// constants are known analytically, embedded nonlinear solves otherwise.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chm/families.hpp"
#include "chm/polynomial.hpp"

namespace chm {

enum class NamedFamily { Fourier, LN, VN, C7D, V8, T8B, T8C, Y9A, Y9B, Y9C, Y10A, Y10C2, Y13 };

std::string_view to_string(NamedFamily f);
/// Case-insensitive.
std::optional<NamedFamily> parse_named_family(std::string_view name);
const std::vector<NamedFamily>& all_named_families();

/// Number of free phases (T8B, T8C: 3; Y10C2: 2; everything else 0).
std::size_t family_arity(NamedFamily f);
/// Fixed order of an isolated construction; 0 for Fourier, LN and VN.
Eigen::Index family_order(NamedFamily f);

struct FamilyId {
  NamedFamily name = NamedFamily::Fourier;
  Eigen::Index order = 0;          // required for Fourier, LN, VN; else 0 or the fixed order
  std::vector<double> parameters;  // phases in [0, 1)
};

/// Throws ParameterOutOfDomain for bad orders or parameters and SolveFailed
/// when an embedded solve finds no admissible root. The result passes
/// is_hadamard at 1e-9.
PhaseMatrix construct_named(const FamilyId& id);

// ---------------------------------------------------------------------------
// Constants and systems behind the constructions, exposed for cross-checks.

struct Quadruplet {
  cplx a, b, c, d;
};

/// The four entries of the order-9 matrix from the radical closed form.
Quadruplet y9c_quadruplet();
/// Bordered order-9 template in a, b, c, d and their inverses.
ComplexMatrix y9c_template(const Quadruplet& q);
/// Five real equations 2 Re(...) + 1 = 0 in the angles of (a, b, c, d).
NonlinearSystem y9c_constraint_system();

/// 1 + 12x + 18x^2 - 64x^3 - 96x^4 + 45x^5 + 43x^6.
Polynomial c7d_sextic();
struct C7DConstants {
  double x_star = 0.0;  // largest real root of the sextic
  cplx a, b, c;
};
C7DConstants c7d_constants();

/// Degree-8 polynomial in y = x + 1/x for the order-8 isolated matrix.
Polynomial v8_octic();
/// Its two quartic factors x^4 + 8x^3 + alpha x^2 + beta x + gamma.
std::array<Polynomial, 2> v8_quartic_factors();
ComplexMatrix v8_template(cplx a, cplx b, cplx c);
/// Every admissible (a, b, c) built from the octic roots, in a fixed order.
std::vector<std::array<cplx, 3>> v8_triples();

/// d = (1 + ab + bc + ca) / (a + b + c + abc); ParameterOutOfDomain when the
/// denominator is below 1e-10 in modulus.
cplx t8b_d(cplx a, cplx b, cplx c);

}  // namespace chm
