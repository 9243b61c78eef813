#pragma once

// Renew-vs-new comparison model: epoxy mass, material cost delta, fabrication
// time of a fresh board, time and energy deltas of renewing instead.
// Positive deltas mean renewal costs more; negative deltas are savings.

#include <string>
#include <vector>

#include "renew/diff.hpp"
#include "renew/error.hpp"
#include "renew/fabplan.hpp"
#include "renew/geometry.hpp"
#include "renew/params.hpp"

namespace renew {

/// Epoxy to fill grooves of area A_g (mm^2) that were cut d_prev deep, in mg.
inline double epoxyMass(double A_g, double d_prev, const SustainParams& params) {
  if (!(d_prev > 0.0)) throw Error("previous groove depth must be > 0");
  if (A_g < 0.0) throw Error("groove area must be >= 0");
  return params.rho_e * A_g * (d_prev + params.depositionDepthOffset);
}

struct MaterialCost {
  double M_e{0.0};    // mg
  double A_s{0.0};    // mm^2
  double A_fr4{0.0};  // mm^2
  double epoxyCost{0.0};
  double stencilCost{0.0};
  double fr4Cost{0.0};
  double P_delta{0.0};
};

/// Cost delta from the three material terms; the FR-4 term is subtracted.
inline MaterialCost costDelta(double M_e, double A_s, double A_fr4, const SustainParams& params) {
  MaterialCost c;
  c.M_e = M_e;
  c.A_s = A_s;
  c.A_fr4 = A_fr4;
  c.epoxyCost = M_e * params.p_u_e;
  c.stencilCost = A_s * params.p_u_s;
  c.fr4Cost = -A_fr4 * params.p_u_fr4;
  c.P_delta = c.epoxyCost + c.stencilCost + c.fr4Cost;
  return c;
}

/// Depth of the grooves the epoxy fills: the old board's own engraving depth.
inline double previousGrooveDepth(const Board& oldBoard) {
  return depthSchedule(oldBoard.baseEngraveDepth, oldBoard.iterationIndex).depth;
}

inline MaterialCost materialAndCostDelta(const RenewalPlan& plan, const Board& oldBoard, const Board& newBoard,
                                         const SustainParams& params) {
  const double M_e = epoxyMass(plan.metrics.A_g, previousGrooveDepth(oldBoard), params);
  return costDelta(M_e, area(oldBoard.outline), area(newBoard.outline), params);
}

/// Seconds to engrave `length` mm of trace at `depth`.
inline double traceEngraveTime(double length, double depth, const SustainParams& params) {
  return length / (params.F_t / 60.0) * passCount(depth, params.dz_t);
}

/// Seconds to cut `length` mm of outline through the board.
inline double outlineCutTime(double length, const SustainParams& params) {
  return length / (params.F_o / 60.0) * passCount(params.d_o, params.dz_o);
}

/// Fabrication time of the design on a fresh substrate, s.
inline double fabricationTimeNew(double L_t, double L_o, double d_t, const SustainParams& params) {
  if (L_t < 0.0 || L_o < 0.0) throw Error("path lengths must be >= 0");
  return traceEngraveTime(L_t, d_t, params) + outlineCutTime(L_o, params);
}

/// Per-stage renewal cost in time (s) and energy (J). engraveDelta is the
/// renewed board's engraving minus fresh-board engraving and may be negative.
struct StageBreakdown {
  double desolder{0.0};
  double clean{0.0};
  double deposit{0.0};
  double cure{0.0};
  double stencilCut{0.0};
  double engraveDelta{0.0};

  double total() const { return desolder + clean + deposit + cure + stencilCut + engraveDelta; }
};

inline StageBreakdown timeDeltaBreakdown(const RenewalMetrics& m, const SustainParams& params, double d_t) {
  const double renewedDepth = d_t + kDepthIncrementPerIteration * (m.n - 1);
  StageBreakdown s;
  s.desolder = params.T_de;
  s.clean = m.n_p * params.t_p;
  s.deposit = m.L_d / params.F_d;
  s.cure = params.T_c;
  s.stencilCut = m.L_s / params.F_l;
  s.engraveDelta = traceEngraveTime(m.L_tPrime, renewedDepth, params) - traceEngraveTime(m.L_t, d_t, params) +
                   outlineCutTime(m.L_oPrime - m.L_o, params);
  return s;
}

inline StageBreakdown timeDeltaBreakdown(const RenewalPlan& plan, const SustainParams& params, double d_t) {
  return timeDeltaBreakdown(plan.metrics, params, d_t);
}

/// Renewal time minus fresh fabrication time, s.
inline double fabricationTimeDelta(const RenewalPlan& plan, const SustainParams& params, double d_t) {
  return timeDeltaBreakdown(plan, params, d_t).total();
}

inline StageBreakdown energyDeltaBreakdown(const RenewalMetrics& m, const SustainParams& params, double d_t) {
  const StageBreakdown t = timeDeltaBreakdown(m, params, d_t);
  StageBreakdown e;
  e.desolder = t.desolder * params.P_de;
  e.clean = t.clean * params.P_i;
  e.deposit = t.deposit * params.P_d;
  e.cure = t.cure * params.P_c;
  e.stencilCut = t.stencilCut * params.P_l;
  e.engraveDelta = t.engraveDelta * params.P_e;
  return e;
}

/// Renewal energy minus fresh fabrication energy, J.
inline double energyDelta(const RenewalPlan& plan, const SustainParams& params, double d_t) {
  return energyDeltaBreakdown(plan.metrics, params, d_t).total();
}

struct SustainabilityReport {
  double epoxyMass{0.0};     // mg
  double stencilArea{0.0};   // mm^2
  double fr4AreaSaved{0.0};  // mm^2
  double costDelta{0.0};
  double timeNew{0.0};      // s
  double timeDelta{0.0};    // s
  double energyDelta{0.0};  // J
  MaterialCost cost;
  StageBreakdown time;
  StageBreakdown energy;
  std::vector<std::string> estimatedDefaults;
  std::vector<std::string> warnings;
};

inline SustainabilityReport analyze(const RenewalPlan& plan, const Board& oldBoard, const Board& newBoard,
                                    const SustainParams& params) {
  validateParams(params);
  const double d_t = newBoard.baseEngraveDepth;
  SustainabilityReport r;
  r.cost = materialAndCostDelta(plan, oldBoard, newBoard, params);
  r.epoxyMass = r.cost.M_e;
  r.stencilArea = r.cost.A_s;
  r.fr4AreaSaved = r.cost.A_fr4;
  r.costDelta = r.cost.P_delta;
  r.timeNew = fabricationTimeNew(plan.metrics.L_t, plan.metrics.L_o, d_t, params);
  r.time = timeDeltaBreakdown(plan, params, d_t);
  r.energy = energyDeltaBreakdown(plan.metrics, params, d_t);
  r.timeDelta = r.time.total();
  r.energyDelta = r.energy.total();
  r.estimatedDefaults = estimatedDefaults(params);
  r.warnings = depthSchedule(d_t, plan.metrics.n).warnings;
  return r;
}

}  // namespace renew
