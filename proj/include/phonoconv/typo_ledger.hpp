#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phonoconv/claims.hpp"
#include "phonoconv/closed_form.hpp"
#include "phonoconv/dark_bright.hpp"
#include "phonoconv/figures.hpp"
#include "phonoconv/io.hpp"
#include "phonoconv/physical_model.hpp"

namespace phonoconv {

// Reconciliation of printed closed-form expressions against re-derived ones.
// Every correction is probed: the printed expression is evaluated on the
// corrected upstream quantities, so a divergence isolates that one symbol.

enum class EntryKind { correction, notation, ambiguity };

inline std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::correction: return "correction";
    case EntryKind::notation: return "notation";
    case EntryKind::ambiguity: return "ambiguity";
  }
  return "?";
}

struct ProbeSite {
  std::string name;
  SystemParams params;
  bool dark_bright = false;  // satisfies Delta2 = 0, Delta1 = -Omega_m, kappa1 = kappa2
};

inline std::vector<ProbeSite> probe_sites() {
  const double g1_weak = coupling_from_cooperativity(1.2, 0.3, 1.0);
  return {
      {"fig2 gamma_m=0.30 C2=4", apply_parameter(conversion_base(0.30), SweepParameter::c2, 4.0)},
      {"fig2 gamma_m=0.45 C2=10",
       apply_parameter(conversion_base(0.45), SweepParameter::c2, 10.0)},
      {"fig4b C1=1.2 C2=6",
       apply_parameter(conversion_base(0.30, g1_weak), SweepParameter::c2, 6.0)},
      {"fig5 G2=0.6", dark_bright_base(0.6), true},
      {"fig5 G2=0.35", dark_bright_base(0.35), true},
  };
}

struct Evaluation {
  std::string site;
  double printed = 0.0;
  double corrected = 0.0;
  double relative = 0.0;
};

struct LedgerEntry {
  std::string symbol;
  std::string context;
  EntryKind kind = EntryKind::correction;
  std::string printed;
  std::string corrected;
  std::string note;
  std::vector<Evaluation> evaluations;  // every probe site where both sides evaluate
};

struct ClaimRecord {
  FigureClaim claim;
  nlohmann::json curves;  // attached only when the claim fails
};

struct TypoLedger {
  double threshold = 1e-6;
  std::vector<ProbeSite> sites;
  std::vector<LedgerEntry> entries;
  std::vector<ClaimRecord> claims;
};

inline double relative_difference(double printed, double corrected) {
  const double scale = std::max(std::abs(printed), std::abs(corrected));
  return scale > 0.0 ? std::abs(printed - corrected) / scale : 0.0;
}

inline std::vector<Evaluation> diverging(const LedgerEntry& e, double threshold) {
  std::vector<Evaluation> out;
  for (const auto& v : e.evaluations)
    if (!(v.relative <= threshold)) out.push_back(v);
  return out;
}

namespace detail {

using Probe = std::function<std::pair<double, double>(const SystemParams&)>;

struct EntrySpec {
  std::string symbol, context;
  EntryKind kind;
  std::string printed, corrected, note;
  Probe probe;            // empty for notation/ambiguity entries
  bool dark_bright_only;  // probe needs the dark/bright constraints
};

inline LedgerEntry evaluate_entry(const EntrySpec& s, const std::vector<ProbeSite>& sites) {
  LedgerEntry e{s.symbol, s.context, s.kind, s.printed, s.corrected, s.note, {}};
  if (!s.probe) return e;
  for (const auto& site : sites) {
    if (s.dark_bright_only && !site.dark_bright) continue;
    try {
      const auto [printed, corrected] = s.probe(site.params);
      e.evaluations.push_back(
          {site.name, printed, corrected, relative_difference(printed, corrected)});
    } catch (const NumericalError&) {
      // a side is singular here; nothing to compare
    } catch (const DomainError&) {
    }
  }
  return e;
}

inline double phonon_sq(const SystemParams& p) {
  return p.omega_m * p.omega_m + 0.25 * p.gamma_m * p.gamma_m;
}

inline std::vector<EntrySpec> mode_conversion_entries() {
  using Q = ClosedFormIntermediates;
  auto q_of = [](const SystemParams& p) { return closed_form_intermediates(p, Form::corrected); };
  const std::string mode1 = "steady intracavity intensity, mode 1";
  const std::string mode2 = "steady intracavity intensity, mode 2";

  std::vector<EntrySpec> out;
  out.push_back(
      {"m1", mode1, EntryKind::correction,
       "m1 = -G_m sqrt(C1) sqrt(C2) gamma_m sqrt(kappa1 kappa2)/4 [2 D1 Omega_m + D2 Omega_m]",
       "m1 = -2 G_m G1 G2 Omega_m D1",
       "The stray D2 Omega_m term does not survive elimination of a2 and b. The cooperativity "
       "prefactor equals G1 G2 identically.",
       [q_of](const SystemParams& p) {
         const Q q = q_of(p);
         const double g1g2 = std::sqrt(cooperativity(p.g1, p.gamma_m, p.kappa1)) *
                             std::sqrt(cooperativity(p.g2, p.gamma_m, p.kappa2)) * p.gamma_m *
                             std::sqrt(p.kappa1 * p.kappa2) / 4.0;
         return std::pair{-p.g_m * g1g2 * (2.0 * q.d1 * p.omega_m + q.d2 * p.omega_m), q.m1};
       },
       false});
  out.push_back({"m2", mode1, EntryKind::correction, "(absent)",
                 "m2 = -G_m G1 G2 gamma_m D1",
                 "Imaginary part of the a1* coefficient; enters A1R, A1I and the denominator.",
                 [q_of](const SystemParams& p) { return std::pair{0.0, q_of(p).m2}; }, false});
  out.push_back({"l2", mode1, EntryKind::correction,
                 "l2 = D4 (D1^2 + D2^2) - |N1|^2 D1 + |N2|^2 D2",
                 "l2 = D4 (D1^2 + D2^2) - |N1|^2 D2 + |N2|^2 D2", "",
                 [q_of](const SystemParams& p) {
                   const Q q = q_of(p);
                   const double dd = q.d1 * q.d1 + q.d2 * q.d2;
                   const double n1sq = std::norm(q.n1_coupling);
                   const double n2 = q.n2_coupling;
                   return std::pair{q.d4 * dd - n1sq * q.d1 + n2 * n2 * q.d2, q.l2};
                 },
                 false});
  out.push_back({"A1R", mode1, EntryKind::correction, "A1R = n1 (m1 + l1) + n2 l2",
                 "A1R = n1 (l1 + m1) + n2 (l2 + m2)", "Follows from the m2 term.",
                 [q_of](const SystemParams& p) {
                   const Q q = q_of(p);
                   return std::pair{q.n1 * (q.m1 + q.l1) + q.n2 * q.l2, q.a1_re};
                 },
                 false});
  out.push_back({"A1I", mode1, EntryKind::correction, "A1I = n2 (l1 - m1) - n1 l1",
                 "A1I = n2 (l1 - m1) + n1 (m2 - l2)",
                 "The printed n1 l1 should be n1 l2; the m2 term is added.",
                 [q_of](const SystemParams& p) {
                   const Q q = q_of(p);
                   return std::pair{q.n2 * (q.l1 - q.m1) - q.n1 * q.l1, q.a1_im};
                 },
                 false});
  out.push_back({"mode-1 denominator", mode1, EntryKind::correction, "[l1^2 + l2^2 - m1^2]^2",
                 "[l1^2 + l2^2 - m1^2 - m2^2]^2", "",
                 [q_of](const SystemParams& p) {
                   const Q q = q_of(p);
                   const double printed = q.l1 * q.l1 + q.l2 * q.l2 - q.m1 * q.m1;
                   return std::pair{printed * printed, q.denom1 * q.denom1};
                 },
                 false});
  out.push_back(
      {"h2", mode2, EntryKind::correction,
       "h2 = A_p [D3 G_m (Omega_m^2 + gamma_m^2/4) - N2 (D4 gamma_m/2 - Omega_m D3)]",
       "h2 = A_p [D3 G_m (Omega_m^2 + gamma_m^2/4) - N2 (D4 gamma_m/2 + Omega_m D3)]",
       "Sign of the Omega_m D3 term; h1, f1, f2, R1, R2, A2R, A2I check out as printed.",
       [q_of](const SystemParams& p) {
         const Q q = q_of(p);
         const double printed = q.pump * (q.d3 * p.g_m * phonon_sq(p) -
                                          q.n2_coupling * (q.d4 * p.gamma_m / 2.0 -
                                                           p.omega_m * q.d3));
         return std::pair{printed, q.h2};
       },
       false});
  out.push_back({"|a1|^2", mode1, EntryKind::correction,
                 "all printed mode-1 expressions together", "all corrections above together",
                 "End-to-end effect on the intensity; the corrected value equals the linear "
                 "solve.",
                 [](const SystemParams& p) {
                   return std::pair{intensity_mode1_closed(p, Form::verbatim),
                                    intensity_mode1_closed(p, Form::corrected)};
                 },
                 false});
  out.push_back({"|a2|^2", mode2, EntryKind::correction,
                 "all printed mode-2 expressions together", "corrected h2",
                 "End-to-end effect on the intensity; the corrected value equals the linear "
                 "solve.",
                 [](const SystemParams& p) {
                   return std::pair{intensity_mode2_closed(p, Form::verbatim),
                                    intensity_mode2_closed(p, Form::corrected)};
                 },
                 false});
  out.push_back(
      {"eta", "conversion efficiency", EntryKind::correction,
       "eta = eta1 eta2 kappa1 kappa2 (A2R~ + A2I~) / [(R1^2 + R2^2) - (f1^2 + f2^2)]^2",
       "eta = eta1 eta2 kappa1 kappa2 (A2R~^2 + A2I~^2) / [(R1^2 + R2^2) - (f1^2 + f2^2)]^2",
       "The numerator must be squared to equal kappa2_ext |a2|^2 / alpha_p^2, the defining "
       "flux ratio. The printed evaluator also carries the printed h2.",
       [](const SystemParams& p) {
         return std::pair{conversion_efficiency_printed(p), conversion_efficiency_closed(p)};
       },
       false});
  out.push_back({"|N1|", mode1, EntryKind::notation, "|N1| = G_m Omega_m + i G_m gamma_m / 2",
                 "N1 = G_m Omega_m + i G_m gamma_m / 2, |N1|^2 = G_m^2 (Omega_m^2 + gamma_m^2/4)",
                 "A modulus cannot be complex; only |N1|^2 enters.", {}, false});
  out.push_back({"N2^2", mode2, EntryKind::notation, "R1, R2 use N2^2; l1, l2 use |N2|^2",
                 "N2 = G1 G2 is real, so N2^2 = |N2|^2", "No numerical consequence.", {},
                 false});
  out.push_back({"A_p", "drive", EntryKind::notation, "A_p (undefined)",
                 "A_p = sqrt(kappa1_ext) alpha_p", "Matches the drive term of the a1 equation.",
                 {}, false});
  return out;
}

inline std::vector<EntrySpec> dark_bright_entries() {
  struct Ctx {
    DarkBrightCoefficients co;
    DarkBrightIntermediates q;
    double kappa, om, ga, ph, sum_sq;
  };
  auto ctx_of = [](const SystemParams& p) {
    Ctx c{coefficients(p), dark_bright_intermediates(p), p.kappa1, p.omega_m, p.gamma_m,
          phonon_sq(p), 0.0};
    c.sum_sq = c.co.g1_tilde * c.co.g1_tilde + c.co.g2_tilde * c.co.g2_tilde;
    return c;
  };
  const std::string basis = "dark/bright basis";
  const std::string bright = "bright-mode steady state";
  const std::string dark = "dark-mode steady state";
  const std::string common =
      "sym = G12 (G1~ + G2~) gamma_m/2, anti = G12 Omega_m (G1~ - G2~), "
      "hop = G_bd (Omega_m^2 + gamma_m^2/4) + anti.";

  std::vector<EntrySpec> out;
  out.push_back(
      {"G_bd", basis, EntryKind::correction,
       "G_bd = [G1 G2 Omega_m + G_m + G_m (G2^2 - G1^2)] / G~^2",
       "G_bd = [G1 G2 Omega_m + G_m (G2^2 - G1^2)] / G~^2",
       "The bare G_m has the wrong dimension against the other terms and drops out of the "
       "rotation.",
       [](const SystemParams& p) {
         return std::pair{coefficients(p, Form::verbatim).g_bd,
                          coefficients(p, Form::corrected).g_bd};
       },
       true});
  out.push_back({"a_D definition", basis, EntryKind::notation,
                 "a_B = (G2 a1 - G1 a2) / G~ (second definition)",
                 "a_D = (G2 a1 - G1 a2) / G~",
                 "Both definitions are printed as a_B; the second is the dark mode.", {}, false});
  out.push_back({"G1~ definition", basis, EntryKind::ambiguity, "G1~ = sqrt(G1^2 + G2^2)",
                 "G~ = sqrt(G1^2 + G2^2), G1~ = G1^2 / G~, G2~ = G2^2 / G~",
                 "The text definition conflicts with the coefficient block; only the latter is "
                 "self-consistent (G1~ + G2~ = G~).",
                 {}, false});
  out.push_back({"dark-phonon term", basis, EntryKind::correction,
                 "-G12 (a_D b + b^dag a_D^dag - a_D^dag b + b^dag a_D)",
                 "-G12 (a_D b + b^dag a_D^dag - a_D^dag b - b^dag a_D)",
                 "Hermiticity fixes the last sign. The G12 couplings enter the corrected R5-R8 "
                 "and dark response with this sign.",
                 {}, false});
  out.push_back({"bright Stokes term", basis, EntryKind::correction,
                 "-G1~ (a_B^dag b + b^dag a_B^dag)", "-G1~ (a_B b + b^dag a_B^dag)",
                 "The printed pair is not Hermitian; the rotated G1 a1 b + h.c. gives the "
                 "corrected one.",
                 {}, false});

  out.push_back({"R1", bright, EntryKind::correction,
                 "R1 = (D_B^2 + kappa^2/4)(Omega_m^2 + gamma_m^2/4) + Omega_m (G1~^2 + G2~^2) D_B",
                 "R1 = (D_B^2 + kappa^2/4)(Omega_m^2 + gamma_m^2/4) + Omega_m (G1~^2 + G2~^2) D_B"
                 " - kappa gamma_m/4 (G1~^2 - G2~^2)",
                 "",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   const double db = c.co.delta_b;
                   return std::pair{(db * db + 0.25 * c.kappa * c.kappa) * c.ph +
                                        c.om * c.sum_sq * db,
                                    c.q.r1};
                 },
                 true});
  out.push_back({"R2", bright, EntryKind::correction,
                 "R2 = Omega_m kappa/2 (G1~^2 + G2~^2)",
                 "R2 = Omega_m kappa/2 (G1~^2 + G2~^2) + D_B gamma_m/2 (G1~^2 - G2~^2)", "",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   return std::pair{0.5 * c.om * c.kappa * c.sum_sq, c.q.r2};
                 },
                 true});
  out.push_back({"R3", bright, EntryKind::correction,
                 "R3 = -2 (G1~^2 + G2~^2) Omega_m D_B", "R3 = -2 G1~ G2~ Omega_m D_B",
                 "The a_B* coupling through the phonon is a cross term G1~ G2~.",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   return std::pair{-2.0 * c.sum_sq * c.om * c.co.delta_b, c.q.r3};
                 },
                 true});
  out.push_back({"R4", bright, EntryKind::correction, "R4 = (G1~^2 + G2~^2) Omega_m kappa",
                 "R4 = G1~ G2~ Omega_m kappa", "As for R3.",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   return std::pair{c.sum_sq * c.om * c.kappa, c.q.r4};
                 },
                 true});
  out.push_back(
      {"R5", bright, EntryKind::correction,
       "R5 = -D_B [G_bd (Omega_m^2 + gamma_m^2/4) + G12 Omega_m (G1~^2 + G2~^2)]",
       "R5 = kappa/2 sym - D_B hop", common,
       [ctx_of](const SystemParams& p) {
         const Ctx c = ctx_of(p);
         return std::pair{-c.co.delta_b * (c.co.g_bd * c.ph + c.co.g_12 * c.om * c.sum_sq),
                          c.q.r5};
       },
       true});
  out.push_back(
      {"R6", bright, EntryKind::correction,
       "R6 = kappa/2 [G_bd (Omega_m^2 + gamma_m^2/4) + G12 Omega_m (G1~^2 + G2~^2)]",
       "R6 = kappa/2 hop + D_B sym", common,
       [ctx_of](const SystemParams& p) {
         const Ctx c = ctx_of(p);
         return std::pair{0.5 * c.kappa * (c.co.g_bd * c.ph + c.co.g_12 * c.om * c.sum_sq),
                          c.q.r6};
       },
       true});
  out.push_back({"R7", bright, EntryKind::correction,
                 "R7 = -G12 Omega_m D_B (G1~^2 + G2~^2)", "R7 = D_B anti - kappa/2 sym", common,
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   return std::pair{-c.co.g_12 * c.om * c.co.delta_b * c.sum_sq, c.q.r7};
                 },
                 true});
  out.push_back({"R8", bright, EntryKind::correction,
                 "R8 = G12 Omega_m kappa/2 (G1~^2 + G2~^2)", "R8 = -kappa/2 anti - D_B sym",
                 common,
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   return std::pair{0.5 * c.co.g_12 * c.om * c.kappa * c.sum_sq, c.q.r8};
                 },
                 true});
  out.push_back({"B_R", dark, EntryKind::correction,
                 "B_R = Omega_m (G1~^2 + G2~^2) / (Omega_m^2 + gamma_m^2/4)",
                 "B_R = 2 G12^2 Omega_m / (Omega_m^2 + gamma_m^2/4)",
                 "Adiabatic phonon shift seen by the dark mode, which couples through G12 only.",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   return std::pair{c.om * c.sum_sq / c.ph, c.q.b_r};
                 },
                 true});
  out.push_back({"dark denominator", dark, EntryKind::correction, "D_D^2 + kappa^2/4",
                 "D_D^2 + kappa^2/4 + 2 B_R D_D",
                 "Determinant of the a_D, a_D* pair including the phonon-induced shift; shared "
                 "by A_D1-A_D6.",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   const double dd = c.co.delta_d;
                   return std::pair{dd * dd + 0.25 * c.kappa * c.kappa, c.q.dark_denominator};
                 },
                 true});

  const std::string ad_corrected =
      "A_D1 + i A_D2 = [a* P - b T] / den, A_D3 + i A_D4 = [a* conj(T) - b conj(P)] / den; "
      "T = G12 (G1~ d_m + G2~ conj(d_m)) / (Omega_m^2 + gamma_m^2/4), d_m = gamma_m/2 + i "
      "Omega_m, P = i G_bd + T, a* = kappa/2 + i (D_D + B_R), b = i B_R, den = dark denominator";
  auto ad_entry = [&](std::string symbol, std::string printed, auto printed_fn, auto field) {
    out.push_back({std::move(symbol), dark, EntryKind::correction, std::move(printed),
                   ad_corrected,
                   "Printed form evaluated with the corrected G_bd and B_R; it misses the "
                   "sym/anti phonon terms and the shifted denominator.",
                   [ctx_of, printed_fn, field](const SystemParams& p) {
                     const Ctx c = ctx_of(p);
                     const double dd = c.co.delta_d;
                     const double den = dd * dd + 0.25 * c.kappa * c.kappa;
                     return std::pair{printed_fn(c, dd, den), c.q.*field};
                   },
                   true});
  };
  ad_entry("A_D1", "A_D1 = -D_D (G_bd + G12 B_R) / (D_D^2 + kappa^2/4)",
           [](const Ctx& c, double dd, double den) {
             return -dd * (c.co.g_bd + c.co.g_12 * c.q.b_r) / den;
           },
           &DarkBrightIntermediates::a_d1);
  ad_entry("A_D2", "A_D2 = kappa/2 (G_bd + G12 B_R) / (D_D^2 + kappa^2/4)",
           [](const Ctx& c, double, double den) {
             return 0.5 * c.kappa * (c.co.g_bd + c.co.g_12 * c.q.b_r) / den;
           },
           &DarkBrightIntermediates::a_d2);
  ad_entry("A_D3", "A_D3 = D_D G12 B_R / (D_D^2 + kappa^2/4)",
           [](const Ctx& c, double dd, double den) { return dd * c.co.g_12 * c.q.b_r / den; },
           &DarkBrightIntermediates::a_d3);
  ad_entry("A_D4", "A_D4 = -kappa/2 G12 B_R / (D_D^2 + kappa^2/4)",
           [](const Ctx& c, double, double den) {
             return -0.5 * c.kappa * c.co.g_12 * c.q.b_r / den;
           },
           &DarkBrightIntermediates::a_d4);
  out.push_back({"A_D5", dark, EntryKind::correction, "A_D5 = (kappa/2) / (D_D^2 + kappa^2/4)",
                 "A_D5 = (kappa/2) / den", "Through the dark denominator only.",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   const double dd = c.co.delta_d;
                   return std::pair{0.5 * c.kappa / (dd * dd + 0.25 * c.kappa * c.kappa),
                                    c.q.a_d5};
                 },
                 true});
  out.push_back({"A_D6", dark, EntryKind::correction, "A_D6 = D_D / (D_D^2 + kappa^2/4)",
                 "A_D6 = D_D / den", "Through the dark denominator only.",
                 [ctx_of](const SystemParams& p) {
                   const Ctx c = ctx_of(p);
                   const double dd = c.co.delta_d;
                   return std::pair{dd / (dd * dd + 0.25 * c.kappa * c.kappa), c.q.a_d6};
                 },
                 true});

  out.push_back({"A_B3", bright, EntryKind::correction,
                 "A_B3 = R3 + R5 A_D3 - R6 A_D4 + R7 A_D1 - R8 A_D2",
                 "A_B3 = R3 + R5 A_D3 - R6 A_D4 + R7 A_D1 + R8 A_D2", "",
                 [ctx_of](const SystemParams& p) {
                   const auto q = ctx_of(p).q;
                   return std::pair{q.r3 + q.r5 * q.a_d3 - q.r6 * q.a_d4 + q.r7 * q.a_d1 -
                                        q.r8 * q.a_d2,
                                    q.a_b3};
                 },
                 true});
  out.push_back({"A_B5", bright, EntryKind::correction,
                 "A_B5 = R5 A_D5 - R6 A_D6 + R7 A_D5 - R8 A_D6",
                 "A_B5 = R5 A_D5 - R6 A_D6 + R7 A_D5 + R8 A_D6", "",
                 [ctx_of](const SystemParams& p) {
                   const auto q = ctx_of(p).q;
                   return std::pair{q.r5 * q.a_d5 - q.r6 * q.a_d6 + q.r7 * q.a_d5 -
                                        q.r8 * q.a_d6,
                                    q.a_b5};
                 },
                 true});
  out.push_back({"A_B6", bright, EntryKind::correction,
                 "A_B6 = R5 A_D6 - R6 A_D5 - R7 A_D6 - R8 A_D5",
                 "A_B6 = R5 A_D6 + R6 A_D5 - R7 A_D6 + R8 A_D5", "",
                 [ctx_of](const SystemParams& p) {
                   const auto q = ctx_of(p).q;
                   return std::pair{q.r5 * q.a_d6 - q.r6 * q.a_d5 - q.r7 * q.a_d6 -
                                        q.r8 * q.a_d5,
                                    q.a_b6};
                 },
                 true});
  out.push_back({"f_a2", bright, EntryKind::correction,
                 "f_a2 = (A_B1 R10 + A_B2 R9 - A_B3 R10 + A_B4 R6) / (A_B1^2 + A_B2^2 - A_B3^2 - "
                 "A_B4^2)",
                 "f_a2 = (A_B1 R10 + A_B2 R9 - A_B3 R10 + A_B4 R9) / (A_B1^2 + A_B2^2 - A_B3^2 - "
                 "A_B4^2)",
                 "Index typo R6 for R9; f_a1, g_a1, g_a2, h_a1, h_a2, J_a2 hold as printed.",
                 [ctx_of](const SystemParams& p) {
                   const auto q = ctx_of(p).q;
                   return std::pair{(q.a_b1 * q.r10 + q.a_b2 * q.r9 - q.a_b3 * q.r10 +
                                     q.a_b4 * q.r6) /
                                        q.bright_denominator,
                                    q.f_a2};
                 },
                 true});
  out.push_back({"J_a1", dark, EntryKind::notation,
                 "J_a1 = A_D1 g_a1 - A_D2 g_a2 + A_D3 g_a1 + A_D4 g_a2 + A_D5 (printed twice)",
                 "single definition, as printed", "The duplicate carries no information.", {},
                 false});
  out.push_back({"|a_B|^2", bright, EntryKind::correction,
                 "all printed bright/dark expressions together", "all corrections above",
                 "End-to-end effect; the corrected value equals the rotated linear solve.",
                 [](const SystemParams& p) {
                   return std::pair{std::norm(steady_dark_bright(p, Form::verbatim).a_b),
                                    std::norm(steady_dark_bright(p, Form::corrected).a_b)};
                 },
                 true});
  out.push_back({"|a_D|^2", dark, EntryKind::correction,
                 "all printed bright/dark expressions together", "all corrections above",
                 "End-to-end effect; the corrected value equals the rotated linear solve.",
                 [](const SystemParams& p) {
                   return std::pair{std::norm(steady_dark_bright(p, Form::verbatim).a_d),
                                    std::norm(steady_dark_bright(p, Form::corrected).a_d)};
                 },
                 true});
  return out;
}

inline std::vector<EntrySpec> parameter_entries() {
  const double omega_b = brillouin_frequency(constants::two_pi * 0.99e12, 2.15, 6327.0,
                                             constants::speed_of_light);
  const std::string parameters = "parameter sets";
  return {
      {"Omega_B", parameters, EntryKind::ambiguity, "Omega_m / 2 pi = 90.63 MHz",
       "2 omega1 n v_a / c / 2 pi = " + format_double(omega_b / constants::two_pi * 1e-6) +
           " MHz for omega1 = 2 pi 0.99 THz, n = 2.15, v_a = 6327 m/s",
       "The quoted phonon frequency is not the Brillouin formula evaluated at the quoted "
       "inputs. The model is dimensionless (Omega_m = 1.242 kappa1), so neither value is used.",
       {}, false},
      {"gamma_m (fig2)", parameters, EntryKind::ambiguity, "gamma_m = 0.030 kappa1 (solid line)",
       "gamma_m = 0.30 kappa1", "The surrounding text and the fig3 parameters use 0.30.", {},
       false},
      {"gamma_m (fig4b)", parameters, EntryKind::ambiguity, "gamma_m = 1.242 kappa1",
       "gamma_m = 0.30 kappa1",
       "1.242 duplicates Omega_m; C1 = 2.13 with G1 = 0.4 requires gamma_m = 0.30.", {}, false},
      {"Delta1 (fig4)", parameters, EntryKind::notation, "Delta2 = -Omega_m + Delta2",
       "Delta1 = -Omega_m + Delta2", "Left-hand side index typo.", {}, false},
      {"detuning convention", parameters, EntryKind::ambiguity,
       "Delta1/2pi = -25 MHz, Delta2/2pi = 65.70 MHz with omega1 - omega2 = -Omega_m",
       "Delta1 = Delta2 - Omega_m (figure convention)",
       "Consistent in magnitude (65.70 - 90.63 = -24.93); the sign bookkeeping of Delta_i = "
       "omega_i - omega_p is tangled, the figure convention is used throughout.",
       {}, false},
      {"kappa_e^ext", "conversion efficiency", EntryKind::notation, "I_out = kappa_e^ext |a2|^2",
       "I_out = kappa2_ext |a2|^2", "Output port of mode 2.", {}, false},
      {"line styles (fig4b)", parameters, EntryKind::ambiguity,
       "C1 = 1.2 (solid), C1 = 2.13 (dashed)",
       "curves labelled by C1 value",
       "The fig3 caption assigns the opposite line styles; datasets are labelled by value.", {},
       false},
  };
}

}  // namespace detail

/// Builds the full ledger: probed corrections, notation and parameter
/// ambiguities, and the figure-claim verdicts (failing ones with their curves).
inline TypoLedger build_ledger(std::optional<int> points = std::nullopt) {
  TypoLedger ledger;
  ledger.sites = probe_sites();
  for (auto&& group : {detail::mode_conversion_entries(), detail::dark_bright_entries(),
                       detail::parameter_entries()})
    for (const auto& spec : group) ledger.entries.push_back(detail::evaluate_entry(spec, ledger.sites));
  // Group by context, keeping first-appearance order.
  std::vector<std::string> contexts;
  for (const auto& e : ledger.entries)
    if (std::find(contexts.begin(), contexts.end(), e.context) == contexts.end())
      contexts.push_back(e.context);
  auto rank = [&](const LedgerEntry& e) {
    return std::find(contexts.begin(), contexts.end(), e.context) - contexts.begin();
  };
  std::stable_sort(ledger.entries.begin(), ledger.entries.end(),
                   [&](const LedgerEntry& a, const LedgerEntry& b) { return rank(a) < rank(b); });

  FigureCache cache(points);
  for (auto& claim : figure_claims(cache)) {
    ClaimRecord rec{claim, nlohmann::json()};
    if (!claim.holds) rec.curves = claim_curves(cache, claim);
    ledger.claims.push_back(std::move(rec));
  }
  return ledger;
}

inline nlohmann::json to_json(const TypoLedger& ledger) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : ledger.sites)
    sites.push_back({{"name", s.name}, {"params", to_json(s.params)}});

  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : ledger.entries) {
    nlohmann::json div = nlohmann::json::array();
    for (const auto& v : diverging(e, ledger.threshold))
      div.push_back({{"site", v.site},
                     {"printed", v.printed},
                     {"corrected", v.corrected},
                     {"relative_difference", v.relative}});
    entries.push_back({{"symbol", e.symbol},
                       {"context", e.context},
                       {"kind", std::string(to_string(e.kind))},
                       {"printed", e.printed},
                       {"corrected", e.corrected},
                       {"note", e.note},
                       {"probed_sites", e.evaluations.size()},
                       {"divergences", std::move(div)}});
  }

  nlohmann::json claims = nlohmann::json::array();
  for (const auto& r : ledger.claims) {
    nlohmann::json c = {{"id", r.claim.id},
                        {"figure", std::string(to_string(r.claim.figure))},
                        {"statement", r.claim.statement},
                        {"holds", r.claim.holds},
                        {"detail", r.claim.detail}};
    if (!r.claim.holds) c["computed_curves"] = r.curves;
    claims.push_back(std::move(c));
  }
  return {{"divergence_threshold", ledger.threshold},
          {"probe_sites", std::move(sites)},
          {"entries", std::move(entries)},
          {"figure_claims", std::move(claims)}};
}

inline void write_markdown(std::ostream& os, const TypoLedger& ledger) {
  os << "# Typo ledger\n\n"
     << "Printed expressions reconciled against re-derived ones. Each probed entry evaluates "
        "the printed expression on corrected inputs; divergences above "
     << format_double(ledger.threshold) << " (relative) are listed.\n\n## Probe sites\n\n";
  for (const auto& s : ledger.sites) {
    const auto& p = s.params;
    os << "- " << s.name << ": delta1=" << format_double(p.delta1)
       << " delta2=" << format_double(p.delta2) << " omega_m=" << format_double(p.omega_m)
       << " kappa2=" << format_double(p.kappa2) << " gamma_m=" << format_double(p.gamma_m)
       << " g_m=" << format_double(p.g_m) << " g1=" << format_double(p.g1)
       << " g2=" << format_double(p.g2) << "\n";
  }

  std::string context;
  for (const auto& e : ledger.entries) {
    if (e.context != context) {
      context = e.context;
      os << "\n## " << context << "\n";
    }
    os << "\n### " << e.symbol << " (" << to_string(e.kind) << ")\n\n"
       << "- printed: `" << e.printed << "`\n"
       << "- corrected: `" << e.corrected << "`\n";
    if (!e.note.empty()) os << "- note: " << e.note << "\n";
    if (!e.evaluations.empty()) {
      const auto div = diverging(e, ledger.threshold);
      os << "- probed at " << e.evaluations.size() << " site(s), diverging at " << div.size()
         << "\n";
      for (const auto& v : div)
        os << "  - " << v.site << ": printed " << format_double(v.printed) << ", corrected "
           << format_double(v.corrected) << ", relative difference "
           << format_double(v.relative) << "\n";
    }
  }

  os << "\n## Figure claims\n\n";
  for (const auto& r : ledger.claims) {
    os << "- [" << (r.claim.holds ? "holds" : "FAILS") << "] " << r.claim.id << ": "
       << r.claim.statement << " (" << r.claim.detail << ")\n";
  }
  for (const auto& r : ledger.claims) {
    if (r.claim.holds) continue;
    os << "\n### Computed curves: " << r.claim.id << "\n";
    for (const auto& curve : r.curves) {
      const auto& data = curve["data"];
      const std::string param = curve["parameter"].get<std::string>();
      const std::string obs = curve["observable"].get<std::string>();
      os << "\n" << curve["figure"].get<std::string>() << " / "
         << curve["label"].get<std::string>() << "\n\n"
         << "| " << param << " | " << obs << " | stability_margin |\n|---|---|---|\n";
      const auto& xs = data[param];
      for (std::size_t k = 0; k < xs.size(); ++k) {
        auto cell = [](const nlohmann::json& v) {
          return v.is_null() ? std::string() : format_double(v.get<double>());
        };
        os << "| " << cell(xs[k]) << " | " << cell(data[obs][k]) << " | "
           << cell(data["stability_margin"][k]) << " |\n";
      }
    }
  }
}

}  // namespace phonoconv
