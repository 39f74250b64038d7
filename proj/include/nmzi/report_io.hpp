#pragma once

// JSON and CSV serialisation of every report the CLI emits. Each JSON emitter
// has a parser that inverts it, so outputs can be re-read by tooling and tests.

#include "nmzi/bohmian.hpp"
#include "nmzi/signal.hpp"
#include "nmzi/tsvf.hpp"

#include <json.hpp>

#include <array>
#include <ostream>
#include <string>

namespace nmzi {

using json = nlohmann::ordered_json;

/// %.17g: round-trips every double exactly.
std::string format_double(double x);

void write_trace_csv(std::ostream& os, const SignalTrace& trace);
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const State& s);
State state_from_json(const json& j);

json to_json(const PeakReport& r);
PeakReport peak_report_from_json(const json& j);

/// The forward/backward states are not serialised; a parsed report carries zero states.
json to_json(const WeakValueReport& r);
WeakValueReport weak_value_report_from_json(const json& j);

json to_json(const TuneReport& r);
TuneReport tune_report_from_json(const json& j);

struct Snapshots {
  std::array<State, 5> forward{State::zero(Stage::T0), State::zero(Stage::T1), State::zero(Stage::T2),
                               State::zero(Stage::T3), State::zero(Stage::T4)};
  std::array<State, 5> backward = forward;
};

Snapshots snapshots(const Network& net);
json to_json(const Snapshots& s);
Snapshots snapshots_from_json(const json& j);

struct BohmReport {
  Trajectory trajectory;
  TransportMap transport;
};

json to_json(const BohmReport& r);
BohmReport bohm_report_from_json(const json& j);

}  // namespace nmzi
