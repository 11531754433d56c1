#include "fermiswap/gate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

namespace fermiswap {

double transit_time(const ChainSpec& chain, const SpinCouplings& couplings) {
  if (!(couplings.J > 0.0)) throw InvalidArgument("transit_time: J must be positive");
  const double v = group_velocity(couplings, kPi / 2);
  return chain.N / (2.0 * v);
}

double tunable_phase_prediction(const SpinCouplings& couplings) {
  if (!(couplings.J > 0.0)) throw InvalidArgument("tunable_phase_prediction: J must be positive");
  return wrap_angle(kPi - 2.0 * std::atan(couplings.V / (2.0 * couplings.J)));
}

std::pair<PacketSpec, PacketSpec> default_packets(const ChainSpec& chain, double sigma) {
  PacketSpec R{0.25 * chain.N, sigma, kPi / 2, chain};
  PacketSpec L{0.75 * chain.N, sigma, -kPi / 2, chain};
  return {R, L};
}

double dispersion_distortion(const PacketSpec& packet, const SpinCouplings& couplings, double tau) {
  const Carrier carrier = carrier_from_momentum(packet.carrier);
  // 20 sigma keeps the Gaussian amplitude below 1e-20 where the ring closes.
  const double needed = std::max<double>(packet.chain.N, 20.0 * packet.sigma);
  ChainSpec ring = packet.chain;
  ring.boundary = Boundary::periodic;
  ring.N = 4 * static_cast<int>(std::ceil(needed / 4.0));
  PacketSpec free = packet;
  free.chain = ring;
  free.center = 0.5 * ring.N;
  const auto psi = make_packet(free).state;
  const auto exact = evolve_single(psi, couplings, tau);
  const auto linear = linear_transport_reference(psi, couplings, tau, carrier);
  return std::clamp(1.0 - fidelity(linear, exact), 0.0, 1.0);
}

namespace {

// sum_j |a(j)| |b(j)|, a positional overlap that ignores phases
double envelope_overlap(const SingleExcitationState& a, const SingleExcitationState& b) {
  return (a.amps.cwiseAbs().array() * b.amps.cwiseAbs().array()).sum();
}

}  // namespace

GateReport run_gate(const GateRunSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  spec.chain.validate();
  if (spec.chain.boundary != Boundary::open) {
    throw InvalidArgument("run_gate: gate runs use an open chain");
  }
  if (spec.R.chain.N != spec.chain.N || spec.L.chain.N != spec.chain.N) {
    throw InvalidArgument("run_gate: packet chains differ from the run chain");
  }
  const double tau = spec.resolved_tau();
  if (tau < 0.0) throw InvalidArgument("run_gate: evolution time must be nonnegative");

  GateReport rep;
  rep.N = spec.chain.N;
  rep.J = spec.couplings.J;
  rep.V = spec.couplings.V;
  rep.sigma = spec.R.sigma;
  rep.tau = tau;
  rep.tol = spec.propagation.tol;

  const auto R = make_packet(spec.R);
  const auto L = make_packet(spec.L);
  rep.R_tail_mass = R.tail_mass;
  rep.L_tail_mass = L.tail_mass;
  if (!R.valid) rep.warnings.push_back("R packet tail mass near edges/middle exceeds 1e-6");
  if (!L.valid) rep.warnings.push_back("L packet tail mass near edges/middle exceeds 1e-6");
  if (spec.R.sigma != spec.L.sigma) rep.warnings.push_back("R and L widths differ; sigma column reports R");

  const auto H = build_hamiltonian(spec.chain, spec.couplings, spec.diagonal_shift);
  const auto initial = product_state(R.state, L.state);
  rep.norm_factor = initial.norm_factor;
  auto evolved = evolve_two(initial.state, H, tau, spec.propagation);
  rep.stats = evolved.stats;

  const auto R_tau = evolve_single(R.state, spec.couplings, tau);
  const auto L_tau = evolve_single(L.state, spec.couplings, tau);
  auto reference = product_state(R_tau, L_tau).state;
  reference.amps *= std::polar(1.0, -spec.diagonal_shift * tau);

  const cplx ov = overlap(reference, evolved.state);
  rep.phi_nl = wrap_angle(std::arg(ov));
  rep.f_mag = std::min(1.0, std::abs(ov));
  rep.f_swap = std::min(1.0, 0.5 * (envelope_overlap(L.state, R_tau) + envelope_overlap(R.state, L_tau)));
  rep.R_centroid = R_tau.centroid();
  rep.L_centroid = L_tau.centroid();

  try {
    const Carrier carrier = carrier_from_momentum(spec.R.carrier);
    rep.distortion = dispersion_distortion(spec.R, spec.couplings, tau);
    const auto lin = linear_transport_reference(R.state, spec.couplings, tau, carrier);
    rep.chain_distortion = std::clamp(1.0 - fidelity(lin, R_tau), 0.0, 1.0);
  } catch (const InvalidArgument&) {
    rep.distortion = std::numeric_limits<double>::quiet_NaN();
    rep.chain_distortion = std::numeric_limits<double>::quiet_NaN();
    rep.warnings.push_back("distortion undefined: R carrier is not +-pi/2");
  }

  rep.phi_pred = spec.couplings.J > 0.0 ? tunable_phase_prediction(spec.couplings)
                                        : std::numeric_limits<double>::quiet_NaN();
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<GateOutcome> run_gate_batch(const std::vector<GateRunSpec>& specs, int threads) {
  std::vector<GateOutcome> out(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        out[i].report = run_gate(specs[i]);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, threads));
  const std::size_t pool = std::min(n, specs.size());
  if (pool <= 1) {
    worker();
    return out;
  }
  {
    std::vector<std::jthread> workers;
    workers.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t) workers.emplace_back(worker);
  }
  return out;
}

std::vector<SweepRow> phase_sweep(const ChainSpec& chain, double J, const std::vector<double>& V_values,
                                  double sigma, std::optional<double> tau,
                                  const PropagationOptions& propagation, int threads) {
  std::vector<GateRunSpec> specs;
  specs.reserve(V_values.size());
  for (double V : V_values) {
    GateRunSpec s;
    s.chain = chain;
    s.couplings = {J, V};
    std::tie(s.R, s.L) = default_packets(chain, sigma);
    s.tau = tau;
    s.propagation = propagation;
    specs.push_back(s);
  }
  auto outcomes = run_gate_batch(specs, threads);
  std::vector<SweepRow> rows;
  rows.reserve(V_values.size());
  for (std::size_t i = 0; i < V_values.size(); ++i) {
    rows.push_back({V_values[i] / (2.0 * J), std::move(outcomes[i])});
  }
  return rows;
}

}  // namespace fermiswap
