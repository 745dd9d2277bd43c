#include "sandwalk/catalog.hpp"

#include <fstream>
#include <sstream>

namespace sandwalk {

namespace {

Rat parse_rat(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash == std::string::npos) return Rat(Int(tok));
    return Rat(Int(tok.substr(0, slash)), Int(tok.substr(slash + 1)));
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

struct RawEntry {
    std::string name, phi, p_plus, p_zero;
    int rank = 0;
    Int modulus = 1;
    std::vector<std::pair<std::string, std::string>> kernel_gens;  // label : row
};

GroupSpec build_entry(const RawEntry& raw) {
    if (raw.name.empty()) throw std::invalid_argument("catalog: entry without name");
    if (raw.rank < 1) throw std::invalid_argument("catalog: entry " + raw.name + " missing rank");
    auto rows = split(raw.phi, ';');
    if (static_cast<int>(rows.size()) != raw.rank)
        throw std::invalid_argument("catalog: phi row count mismatch in " + raw.name);
    RatMatrix phi = rat_zero(raw.rank, raw.rank);
    for (int i = 0; i < raw.rank; ++i) {
        std::istringstream ss(rows[static_cast<std::size_t>(i)]);
        std::string tok;
        int j = 0;
        while (ss >> tok) {
            if (j >= raw.rank) throw std::invalid_argument("catalog: phi row too long in " + raw.name);
            phi(i, j++) = parse_rat(tok);
        }
        if (j != raw.rank) throw std::invalid_argument("catalog: phi row too short in " + raw.name);
    }
    std::vector<RatVector> gens;
    std::vector<std::string> labels;
    for (const auto& [label, row] : raw.kernel_gens) {
        RatVector v(raw.rank);
        std::istringstream ss(row);
        std::string tok;
        int j = 0;
        while (ss >> tok) {
            if (j >= raw.rank) throw std::invalid_argument("catalog: kernel_gen too long in " + raw.name);
            v(j++) = parse_rat(tok);
        }
        if (j != raw.rank) throw std::invalid_argument("catalog: kernel_gen too short in " + raw.name);
        gens.push_back(std::move(v));
        labels.push_back(label);
    }
    return make_group_spec(raw.name, phi, raw.modulus, std::move(gens), std::move(labels),
                           raw.p_plus, raw.p_zero);
}

}  // namespace

std::vector<GroupSpec> parse_catalog(const std::string& text) {
    std::vector<GroupSpec> entries;
    std::istringstream in(text);
    std::string line;
    RawEntry raw;
    bool open = false;
    auto flush = [&] {
        if (open) entries.push_back(build_entry(raw));
        raw = RawEntry{};
    };
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line == "[group]") {
            flush();
            open = true;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("catalog: expected key=value on line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!open) throw std::invalid_argument("catalog: key outside [group] on line " + std::to_string(lineno));
        if (key == "name") raw.name = value;
        else if (key == "rank") raw.rank = std::stoi(value);
        else if (key == "modulus") raw.modulus = Int(value);
        else if (key == "phi") raw.phi = value;
        else if (key == "p_plus") raw.p_plus = value;
        else if (key == "p_zero") raw.p_zero = value;
        else if (key == "kernel_gen") {
            auto colon = value.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("catalog: kernel_gen needs 'label : row' on line " +
                                            std::to_string(lineno));
            raw.kernel_gens.emplace_back(trim(value.substr(0, colon)), trim(value.substr(colon + 1)));
        } else {
            throw std::invalid_argument("catalog: unknown key '" + key + "' on line " +
                                        std::to_string(lineno));
        }
    }
    flush();
    return entries;
}

std::vector<GroupSpec> load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("catalog: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

std::string serialize_catalog(const std::vector<GroupSpec>& entries) {
    std::ostringstream out;
    for (const auto& spec : entries) {
        out << "[group]\n";
        out << "name = " << spec.name << "\n";
        out << "rank = " << spec.rank << "\n";
        out << "modulus = " << spec.modulus << "\n";
        out << "phi = ";
        for (Index i = 0; i < spec.phi.rows(); ++i) {
            if (i) out << " ; ";
            for (Index j = 0; j < spec.phi.cols(); ++j) {
                if (j) out << ' ';
                out << spec.phi(i, j);
            }
        }
        out << "\n";
        for (std::size_t g = 0; g < spec.kernel_gens.size(); ++g) {
            out << "kernel_gen = " << spec.kernel_labels[g] << " :";
            for (Index j = 0; j < spec.kernel_gens[g].size(); ++j)
                out << ' ' << spec.kernel_gens[g](j);
            out << "\n";
        }
        if (!spec.p_plus_text.empty()) out << "p_plus = " << spec.p_plus_text << "\n";
        if (!spec.p_zero_text.empty()) out << "p_zero = " << spec.p_zero_text << "\n";
        out << "\n";
    }
    return out.str();
}

const std::vector<GroupSpec>& default_catalog() {
    static const std::vector<GroupSpec> entries = parse_catalog(R"(
# Built-in group catalog.

[group]
name = sol
rank = 2
modulus = 1
phi = 2 1 ; 1 1
kernel_gen = a : 1 0
p_plus = t^2-3*t+1
p_zero = 1

[group]
name = heisenberg_action
rank = 2
modulus = 1
phi = 1 1 ; 0 1
kernel_gen = a : 0 1

[group]
name = bs12
rank = 1
modulus = 2
phi = 2
kernel_gen = a : 1
p_plus = t-2
p_zero = 1

[group]
name = golden
rank = 4
modulus = 1
phi = 0 1 0 0 ; 1 1 0 0 ; 0 0 -1 1 ; 0 0 1 0
kernel_gen = a : 1 0 0 0
kernel_gen = b : 0 0 1 0
p_plus = t^4-3*t^2+1
p_zero = 1

[group]
name = conner_g1
rank = 4
modulus = 1
phi = 2 -1 2 -1 ; 1 0 0 0 ; 0 1 0 0 ; 0 0 1 0
kernel_gen = a : 1 0 0 0

[group]
name = g2
rank = 4
modulus = 1
phi = 3 -2 3 -1 ; 1 0 0 0 ; 0 1 0 0 ; 0 0 1 0
kernel_gen = a : 1 0 0 0
p_plus = t^2-3*t+1
p_zero = t^2+1
)");
    return entries;
}

const GroupSpec& find_group(const std::vector<GroupSpec>& catalog, const std::string& name) {
    for (const auto& e : catalog)
        if (e.name == name) return e;
    throw std::invalid_argument("unknown group '" + name + "'");
}

}  // namespace sandwalk
