#pragma once

#include <map>
#include <string>
#include <vector>

#include "fg/barriers.hpp"
#include "fg/diagnostics.hpp"

namespace fg {

/// Shortest-round-trip decimal form of a double; bit-for-bit reproducible
/// across runs, used by every artifact writer.
std::string fmt_double(double v);

/// FNV-1a 64-bit hash, hex-encoded; applied to canonical config text.
std::string fnv1a_hex(const std::string& text);

/// Field as CSV rows (coord,value) including the explicit boundary zeros.
std::string field_to_csv(const Field& f, const std::string& header_comment = "");

/// Snapshot JSON {params, grid, time, values}.
std::string snapshot_to_json(const Field& f, const Params& params);

/// Reads back a snapshot written by snapshot_to_json.
std::pair<Field, Params> snapshot_from_json(const std::string& text);

/// Trajectory in long CSV form: time,coord,value (boundary rows included).
std::string trajectory_to_csv(const Trajectory& traj, const std::string& header_comment = "");

/// Summary CSV: time,sup_norm,lipschitz_estimate,energy with energy the
/// trapezoid integral of u^2.
std::string trajectory_summary_csv(const Trajectory& traj,
                                   const std::string& header_comment = "");

std::string certification_to_json(const CertificationReport& rep);
std::string domination_to_json(const DominationReport& rep);

/// Profile header JSON {p, domain, sup_norm, grad_sup_norm, lipschitz_const, ...}.
std::string profile_header_json(const Profile& prof, double p,
                                const std::map<std::string, std::string>& extra = {});

const char* event_kind_name(EventKind k);

void write_text_file(const std::string& path, const std::string& content);

} // namespace fg
