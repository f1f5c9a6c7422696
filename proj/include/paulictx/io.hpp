#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paulictx/contextuality.hpp"
#include "paulictx/measures.hpp"
#include "paulictx/trees.hpp"

namespace paulictx {

/// One parsed input file. Lines hold `<coeff> <pauli>` or a bare Pauli word
/// (coefficient 1). `#` starts a comment; leading comment lines are kept.
struct HamiltonianFile {
    std::string path;
    std::string label;
    std::vector<std::string> comments;
    Hamiltonian hamiltonian;
};

HamiltonianFile parse_hamiltonian_text(std::string_view text, std::string label);
HamiltonianFile parse_hamiltonian_file(const std::string& path);

/// Result of one command on one input, serializable to JSON and text.
struct ReportDocument {
    int schema_version = 1;
    std::string command;
    std::string label;
    std::size_t n_qubits = 0;
    std::size_t n_terms = 0;
    bool contextual = false;
    std::optional<ContextualWitness> witness;
    std::vector<std::string> witness_ops;
    std::optional<CliquePartition> certificate;
    std::optional<DeterminingTree> witness_tree;
    std::optional<MeasureReport> measures;
    double timing_ms = 0.0;

    bool operator==(const ReportDocument&) const = default;
};

ReportDocument run_check(const HamiltonianFile& file);
ReportDocument run_witness(const HamiltonianFile& file);
ReportDocument run_measure(
    const HamiltonianFile& file, const std::vector<double>& ps, MeasureMethod method,
    const MeasureOptions& options = {});

nlohmann::json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const nlohmann::json& j);
std::string to_text(const ReportDocument& doc);

/// Graphviz view of the commutation graph: commuting pairs are edges. A
/// noncontextual verdict renders its cliques as clusters; a contextual one
/// highlights the obstructing quadruple.
std::string export_dot(const Verdict& verdict);

/// "0", "1", "2.5", "inf": stable key for a norm order.
std::string format_p(double p);

/// Comma-separated norm orders, e.g. "0,1,2,inf".
std::vector<double> parse_p_list(std::string_view text);

}  // namespace paulictx
