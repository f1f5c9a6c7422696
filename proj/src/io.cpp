#include "paulictx/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace paulictx {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view token, const std::string& where) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(where + ": bad coefficient '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

HamiltonianFile parse_hamiltonian_text(std::string_view text, std::string label) {
    std::vector<std::pair<double, SignedPauli>> entries;
    std::vector<std::string> comments;
    bool seen_term = false;
    std::size_t expected_qubits = 0;

    std::istringstream stream{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line = raw;
        std::string_view comment;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            comment = trim(line.substr(hash + 1));
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (!comment.empty() && !seen_term) {
                comments.emplace_back(comment);
            }
            continue;
        }
        seen_term = true;
        std::string where = label + ":" + std::to_string(line_no);

        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (pos < line.size()) {
            std::size_t end = line.find_first_of(" \t", pos);
            if (end == std::string_view::npos) {
                end = line.size();
            }
            if (end > pos) {
                tokens.push_back(line.substr(pos, end - pos));
            }
            pos = end + 1;
        }
        double coeff = 1.0;
        std::string_view word;
        if (tokens.size() == 1) {
            word = tokens[0];
        } else if (tokens.size() == 2) {
            coeff = parse_double(tokens[0], where);
            word = tokens[1];
        } else {
            throw ParseError(where + ": expected '<coeff> <pauli>' or a bare Pauli word");
        }
        SignedPauli term;
        try {
            term = parse_pauli(word);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (expected_qubits == 0) {
            expected_qubits = term.op.n_qubits();
        } else if (term.op.n_qubits() != expected_qubits) {
            throw DimensionError(
                where + ": term acts on " + std::to_string(term.op.n_qubits()) +
                " qubits, expected " + std::to_string(expected_qubits));
        }
        entries.emplace_back(coeff, std::move(term));
    }
    if (entries.empty()) {
        throw ParseError(label + ": no terms found");
    }

    HamiltonianFile file;
    file.label = std::move(label);
    file.comments = std::move(comments);
    try {
        file.hamiltonian = make_hamiltonian(entries);
    } catch (const DimensionError& e) {
        throw DimensionError(file.label + ": " + e.what());
    }
    return file;
}

HamiltonianFile parse_hamiltonian_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path + ": cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    HamiltonianFile file = parse_hamiltonian_text(buffer.str(), std::filesystem::path(path).stem().string());
    file.path = path;
    return file;
}

namespace {

ReportDocument base_document(const HamiltonianFile& file, const char* command) {
    ReportDocument doc;
    doc.command = command;
    doc.label = file.label;
    doc.n_qubits = file.hamiltonian.terms.n_qubits();
    doc.n_terms = file.hamiltonian.terms.size();
    return doc;
}

void fill_verdict(ReportDocument& doc, const Verdict& verdict) {
    doc.contextual = verdict.contextual();
    if (verdict.witness) {
        doc.witness = *verdict.witness;
        for (const PauliOp& op : verdict.witness_ops()) {
            doc.witness_ops.push_back(op.letters());
        }
    } else {
        doc.certificate = verdict.certificate;
    }
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

ReportDocument run_check(const HamiltonianFile& file) {
    ReportDocument doc = base_document(file, "check");
    auto start = Clock::now();
    Verdict verdict = is_contextual(file.hamiltonian.terms);
    doc.timing_ms = ms_since(start);
    fill_verdict(doc, verdict);
    return doc;
}

ReportDocument run_witness(const HamiltonianFile& file) {
    ReportDocument doc = base_document(file, "witness");
    auto start = Clock::now();
    Verdict verdict = is_contextual(file.hamiltonian.terms);
    fill_verdict(doc, verdict);
    if (verdict.witness) {
        auto ops = verdict.witness_ops();
        doc.witness_tree = witness_from_quadruple(verdict.witness->form, ops[0], ops[1], ops[2], ops[3]);
    }
    doc.timing_ms = ms_since(start);
    return doc;
}

ReportDocument run_measure(
    const HamiltonianFile& file, const std::vector<double>& ps, MeasureMethod method,
    const MeasureOptions& options) {
    ReportDocument doc = base_document(file, "measure");
    std::vector<double> norms = ps;
    std::sort(norms.begin(), norms.end());
    norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
    auto start = Clock::now();
    fill_verdict(doc, is_contextual(file.hamiltonian.terms));
    doc.measures = compute_measures(file.hamiltonian, norms, method, options);
    doc.timing_ms = ms_since(start);
    return doc;
}

namespace {

nlohmann::json tree_json(const DeterminingTree& t) {
    nlohmann::json j;
    j["sign"] = t.node.sign;
    j["pauli"] = t.node.op.letters();
    if (!t.is_leaf()) {
        auto children = nlohmann::json::array();
        for (const DeterminingTree& child : t.children) {
            children.push_back(tree_json(child));
        }
        j["children"] = std::move(children);
    }
    return j;
}

DeterminingTree tree_from_json(const nlohmann::json& j) {
    DeterminingTree t;
    t.node.op = PauliOp::from_letters(j.at("pauli").get<std::string>());
    t.node.sign = j.at("sign").get<int>();
    if (j.contains("children")) {
        for (const nlohmann::json& child : j.at("children")) {
            t.children.push_back(tree_from_json(child));
        }
    }
    return t;
}

double parse_p_token(std::string_view token, const char* what) {
    std::string lowered(token);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "inf" || lowered == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(std::string(what) + ": bad norm order '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

nlohmann::json to_json(const ReportDocument& doc) {
    nlohmann::json j;
    j["schema_version"] = doc.schema_version;
    j["command"] = doc.command;
    j["label"] = doc.label;
    j["n_qubits"] = doc.n_qubits;
    j["n_terms"] = doc.n_terms;
    j["contextual"] = doc.contextual;
    if (doc.witness) {
        j["witness"] = {
            {"indices", doc.witness->indices},
            {"form", form_name(doc.witness->form)},
            {"ops", doc.witness_ops},
        };
    }
    if (doc.certificate) {
        j["certificate"] = {
            {"universal", doc.certificate->universal},
            {"cliques", doc.certificate->cliques},
        };
    }
    if (doc.witness_tree) {
        j["witness_tree"] = tree_json(*doc.witness_tree);
    }
    if (doc.measures) {
        const MeasureReport& m = *doc.measures;
        nlohmann::json cd = nlohmann::json::object();
        for (const auto& [p, value] : m.cd_values) {
            cd[format_p(p)] = value;
        }
        nlohmann::json measures = {
            {"method", method_name(m.method)},
            {"cd0",
             {{"numerator", m.cd0.num}, {"denominator", m.cd0.den}, {"value", m.cd0.value()}}},
            {"cd", std::move(cd)},
            {"removed_indices", m.removed},
            {"kept_indices", m.kept},
        };
        if (m.csep) {
            measures["csep"] = *m.csep;
        }
        j["measures"] = std::move(measures);
    }
    j["timing_ms"] = doc.timing_ms;
    return j;
}

ReportDocument report_from_json(const nlohmann::json& j) {
    try {
        ReportDocument doc;
        doc.schema_version = j.at("schema_version").get<int>();
        if (doc.schema_version != 1) {
            throw ParseError(
                "report: unsupported schema_version " + std::to_string(doc.schema_version));
        }
        doc.command = j.at("command").get<std::string>();
        doc.label = j.at("label").get<std::string>();
        doc.n_qubits = j.at("n_qubits").get<std::size_t>();
        doc.n_terms = j.at("n_terms").get<std::size_t>();
        doc.contextual = j.at("contextual").get<bool>();
        if (j.contains("witness")) {
            const nlohmann::json& w = j.at("witness");
            ContextualWitness witness;
            witness.indices = w.at("indices").get<std::array<std::size_t, 4>>();
            std::string form = w.at("form").get<std::string>();
            if (form == form_name(QuadrupleForm::kWedge)) {
                witness.form = QuadrupleForm::kWedge;
            } else if (form == form_name(QuadrupleForm::kChain)) {
                witness.form = QuadrupleForm::kChain;
            } else if (form == form_name(QuadrupleForm::kCycle)) {
                witness.form = QuadrupleForm::kCycle;
            } else {
                throw ParseError("report: unknown obstruction form '" + form + "'");
            }
            doc.witness = witness;
            doc.witness_ops = w.at("ops").get<std::vector<std::string>>();
        }
        if (j.contains("certificate")) {
            const nlohmann::json& c = j.at("certificate");
            CliquePartition certificate;
            certificate.universal = c.at("universal").get<std::vector<std::size_t>>();
            certificate.cliques = c.at("cliques").get<std::vector<std::vector<std::size_t>>>();
            doc.certificate = std::move(certificate);
        }
        if (j.contains("witness_tree")) {
            doc.witness_tree = tree_from_json(j.at("witness_tree"));
        }
        if (j.contains("measures")) {
            const nlohmann::json& m = j.at("measures");
            MeasureReport measures;
            std::string method = m.at("method").get<std::string>();
            if (method == method_name(MeasureMethod::kExact)) {
                measures.method = MeasureMethod::kExact;
            } else if (method == method_name(MeasureMethod::kGreedy)) {
                measures.method = MeasureMethod::kGreedy;
            } else {
                throw ParseError("report: unknown method '" + method + "'");
            }
            measures.cd0 = Rational{
                m.at("cd0").at("numerator").get<std::uint64_t>(),
                m.at("cd0").at("denominator").get<std::uint64_t>()};
            for (const auto& [key, value] : m.at("cd").items()) {
                measures.cd_values.emplace_back(parse_p_token(key, "report"), value.get<double>());
            }
            std::sort(measures.cd_values.begin(), measures.cd_values.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (m.contains("csep")) {
                measures.csep = m.at("csep").get<double>();
            }
            measures.removed = m.at("removed_indices").get<std::vector<std::size_t>>();
            measures.kept = m.at("kept_indices").get<std::vector<std::size_t>>();
            doc.measures = std::move(measures);
        }
        doc.timing_ms = j.at("timing_ms").get<double>();
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

namespace {

std::string join_indices(const std::vector<std::size_t>& indices) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out << (i ? ", " : "") << indices[i];
    }
    out << "]";
    return out.str();
}

}  // namespace

std::string to_text(const ReportDocument& doc) {
    std::ostringstream out;
    out << "label: " << doc.label << "\n";
    out << "command: " << doc.command << "\n";
    out << "terms: " << doc.n_terms << " on " << doc.n_qubits
        << (doc.n_qubits == 1 ? " qubit\n" : " qubits\n");
    out << "verdict: " << (doc.contextual ? "contextual" : "noncontextual") << "\n";
    if (doc.witness) {
        out << "obstruction: " << form_name(doc.witness->form) << " at indices ";
        out << "[" << doc.witness->indices[0] << ", " << doc.witness->indices[1] << ", "
            << doc.witness->indices[2] << ", " << doc.witness->indices[3] << "]";
        if (!doc.witness_ops.empty()) {
            out << " =";
            for (const std::string& op : doc.witness_ops) {
                out << " " << op;
            }
        }
        out << "\n";
    }
    if (doc.certificate) {
        out << "universal:";
        if (doc.certificate->universal.empty()) {
            out << " (none)";
        }
        for (std::size_t i : doc.certificate->universal) {
            out << " " << i;
        }
        out << "\n";
        out << "cliques:";
        if (doc.certificate->cliques.empty()) {
            out << " (none)";
        }
        for (const std::vector<std::size_t>& clique : doc.certificate->cliques) {
            out << " {";
            for (std::size_t i = 0; i < clique.size(); ++i) {
                out << (i ? ", " : "") << clique[i];
            }
            out << "}";
        }
        out << "\n";
    }
    if (doc.witness_tree) {
        out << "witness tree:\n" << to_text(*doc.witness_tree);
    }
    if (doc.measures) {
        const MeasureReport& m = *doc.measures;
        out << "method: " << method_name(m.method) << "\n";
        out << "cd0: " << m.cd0.num << "/" << m.cd0.den << " = " << m.cd0.value() << "\n";
        for (const auto& [p, value] : m.cd_values) {
            out << "cd" << format_p(p) << ": " << value << "\n";
        }
        if (m.csep) {
            out << "csep: " << *m.csep << "\n";
        }
        out << "removed indices: " << join_indices(m.removed) << "\n";
        out << "kept indices: " << join_indices(m.kept) << "\n";
    }
    out << "timing: " << doc.timing_ms << " ms\n";
    return out.str();
}

std::string export_dot(const Verdict& verdict) {
    const PauliSet& s = verdict.set;
    std::ostringstream out;
    out << "graph compatibility {\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";

    std::vector<bool> highlighted(s.size(), false);
    if (verdict.witness) {
        for (std::size_t i : verdict.witness->indices) {
            highlighted[i] = true;
        }
    }

    auto emit_node = [&](std::size_t i) {
        out << "  n" << i << " [label=\"" << s[i].letters() << "\"";
        if (highlighted[i]) {
            out << ", color=red, penwidth=2";
        }
        out << "];\n";
    };

    if (verdict.certificate) {
        const CliquePartition& part = *verdict.certificate;
        if (!part.universal.empty()) {
            out << "  subgraph cluster_universal {\n    label=\"universal\";\n";
            for (std::size_t i : part.universal) {
                out << "  ";
                emit_node(i);
            }
            out << "  }\n";
        }
        for (std::size_t c = 0; c < part.cliques.size(); ++c) {
            out << "  subgraph cluster_" << c << " {\n    label=\"clique " << c + 1 << "\";\n";
            for (std::size_t i : part.cliques[c]) {
                out << "  ";
                emit_node(i);
            }
            out << "  }\n";
        }
    } else {
        for (std::size_t i = 0; i < s.size(); ++i) {
            emit_node(i);
        }
    }

    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (!commutes(s[i], s[j])) {
                continue;
            }
            out << "  n" << i << " -- n" << j;
            if (highlighted[i] && highlighted[j]) {
                out << " [color=red, penwidth=2]";
            }
            out << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string format_p(double p) {
    if (std::isinf(p)) {
        return "inf";
    }
    if (p == std::floor(p) && std::abs(p) < 1e15) {
        return std::to_string(static_cast<long long>(p));
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
    if (ec != std::errc{}) {
        throw Error("internal: cannot format norm order");
    }
    return std::string(buf, ptr);
}

std::vector<double> parse_p_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        std::string_view token = trim(text.substr(pos, comma - pos));
        if (token.empty()) {
            throw ParseError("norm list: empty entry");
        }
        out.push_back(parse_p_token(token, "norm list"));
        pos = comma + 1;
        if (comma == text.size()) {
            break;
        }
    }
    if (out.empty()) {
        throw ParseError("norm list: no entries");
    }
    return out;
}

}  // namespace paulictx
