#pragma once

#include <filesystem>
#include <string>

#include "conecert/l1cert.hpp"
#include "conecert/l2cert.hpp"
#include "conecert/models.hpp"
#include "conecert/simulate.hpp"

namespace conecert {

// System files: {"kind","dimensions":{"n","q","r"},"modes":[{"label","A",
// "B","C","D"}],"graph":{"nodes":[...],"edges":[{"from","label","to"}]}}.
// Matrices are row-major nested arrays, node references go by name, mode
// labels are 1-based in files and 0-based in memory. Parse problems raise
// InputError; semantic validation stays with validate_system.
SystemDescription system_from_json(const std::string& text);
std::string system_to_json(const SystemDescription& s);
SystemDescription read_system(const std::filesystem::path& path);
void write_system(const SystemDescription& s, const std::filesystem::path& path);

enum class CertificateKind { L1, L2, Stability };

// Certificate files carry {"kind","gamma","margin","p"|"P"} with the node
// vectors/matrices keyed by node name; stability certificates have no gamma.
CertificateKind read_certificate_kind(const std::filesystem::path& path);

L1Certificate read_l1_certificate(const std::filesystem::path& path, const SwitchingGraph& g);
L2Certificate read_l2_certificate(const std::filesystem::path& path, const SwitchingGraph& g);
StabilityCertificate read_stability_certificate(const std::filesystem::path& path,
                                                const SwitchingGraph& g);

std::string certificate_to_json(const L1Certificate& cert, const SwitchingGraph& g);
std::string certificate_to_json(const L2Certificate& cert, const SwitchingGraph& g);
std::string certificate_to_json(const StabilityCertificate& cert, const SwitchingGraph& g);

void write_certificate(const L1Certificate& cert, const SwitchingGraph& g,
                       const std::filesystem::path& path);
void write_certificate(const L2Certificate& cert, const SwitchingGraph& g,
                       const std::filesystem::path& path);
void write_certificate(const StabilityCertificate& cert, const SwitchingGraph& g,
                       const std::filesystem::path& path);

// Columns: t, node, mode, x..., w..., z..., and V when supplied (one value
// per state). The final row carries the terminal state with empty step
// fields.
void write_trace_csv(const std::filesystem::path& path, const SystemDescription& s,
                     const Trajectory& traj, const std::vector<double>* lyapunov = nullptr);

}  // namespace conecert
