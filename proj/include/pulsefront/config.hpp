#pragma once

// Flat sectioned key-value configs: `[section]` headers, `key = value` lines,
// `#` comments. Media serialize to a [medium] section and parse back
// losslessly for the built-in kinds.

#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsefront/medium.hpp"

namespace pulsefront {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ConfigDoc {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& sec, const std::string& key) const {
        const auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }

    const std::string& get(const std::string& sec, const std::string& key) const {
        const auto s = sections.find(sec);
        if (s == sections.end())
            throw std::invalid_argument("config: missing section [" + sec + "]");
        const auto k = s->second.find(key);
        if (k == s->second.end())
            throw std::invalid_argument("config: missing key '" + key + "' in [" + sec + "]");
        return k->second;
    }

    std::string get_or(const std::string& sec, const std::string& key,
                       const std::string& fallback) const {
        return has(sec, key) ? get(sec, key) : fallback;
    }

    double get_double(const std::string& sec, const std::string& key) const {
        return std::stod(get(sec, key));
    }
    double get_double_or(const std::string& sec, const std::string& key, double fallback) const {
        return has(sec, key) ? get_double(sec, key) : fallback;
    }
    int get_int_or(const std::string& sec, const std::string& key, int fallback) const {
        return has(sec, key) ? std::stoi(get(sec, key)) : fallback;
    }

    std::vector<double> get_list(const std::string& sec, const std::string& key) const {
        std::vector<double> out;
        std::string item;
        std::istringstream in(get(sec, key));
        while (std::getline(in, item, ',')) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            out.push_back(std::stod(item));
        }
        return out;
    }

    void set(const std::string& sec, const std::string& key, const std::string& value) {
        sections[sec][key] = value;
    }
    void set(const std::string& sec, const std::string& key, double value) {
        set(sec, key, format_double(value));
    }

    std::string serialize() const {
        std::string out;
        for (const auto& [sec, kv] : sections) {
            out += "[" + sec + "]\n";
            for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
            out += "\n";
        }
        return out;
    }
};

namespace detail {
inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace detail

inline ConfigDoc parse_config(const std::string& text) {
    ConfigDoc doc;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            doc.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value' inside a section");
        doc.sections[section][detail::trim(line.substr(0, eq))] =
            detail::trim(line.substr(eq + 1));
    }
    return doc;
}

inline ConfigDoc load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// FNV-1a over the raw config text, printed as 16 hex digits.
inline std::string config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void medium_to_config(const PeriodicMedium& med, ConfigDoc& doc) {
    switch (med.spec.kind) {
        case MediumKind::cubic:
            doc.set("medium", "kind", "cubic");
            doc.set("medium", "a", med.spec.a_coef[0]);
            doc.set("medium", "a_sin", med.spec.a_coef.size() > 1 ? med.spec.a_coef[1] : 0.0);
            doc.set("medium", "b", med.spec.b_coef[0]);
            doc.set("medium", "b_sin", med.spec.b_coef.size() > 1 ? med.spec.b_coef[1] : 0.0);
            break;
        case MediumKind::a4:
            doc.set("medium", "kind", "a4");
            doc.set("medium", "a", med.spec.a_coef[0]);
            doc.set("medium", "base_b", med.spec.base_b);
            doc.set("medium", "amp", med.spec.amp);
            doc.set("medium", "delta0p", med.spec.delta0p);
            break;
        case MediumKind::custom_table: {
            doc.set("medium", "kind", "custom-table");
            std::string a_list, b_list;
            for (std::size_t i = 0; i < med.spec.a_coef.size(); ++i)
                a_list += (i ? ", " : "") + format_double(med.spec.a_coef[i]);
            for (std::size_t i = 0; i < med.spec.b_coef.size(); ++i)
                b_list += (i ? ", " : "") + format_double(med.spec.b_coef[i]);
            doc.set("medium", "a_table", a_list);
            doc.set("medium", "b_table", b_list);
            break;
        }
    }
    doc.set("medium", "gamma0", med.gamma0);
    doc.set("medium", "delta0", med.delta0);
}

inline PeriodicMedium medium_from_config(const ConfigDoc& doc) {
    const std::string kind = doc.get("medium", "kind");
    PeriodicMedium med;
    if (kind == "cubic") {
        med = make_cubic_medium(doc.get_double("medium", "a"), doc.get_double("medium", "b"),
                                doc.get_double_or("medium", "b_sin", 0.0),
                                doc.get_double_or("medium", "a_sin", 0.0));
    } else if (kind == "a4") {
        med = make_a4_medium(doc.get_double("medium", "base_b"), doc.get_double("medium", "amp"),
                             doc.get_double("medium", "delta0p"),
                             doc.get_double_or("medium", "a", 1.0));
    } else if (kind == "custom-table") {
        med = make_table_medium(doc.get_list("medium", "a_table"),
                                doc.get_list("medium", "b_table"));
    } else {
        throw std::invalid_argument("config: unknown medium kind '" + kind + "'");
    }
    if (doc.has("medium", "gamma0")) med.gamma0 = doc.get_double("medium", "gamma0");
    if (doc.has("medium", "delta0")) med.delta0 = doc.get_double("medium", "delta0");
    return med;
}

} // namespace pulsefront
