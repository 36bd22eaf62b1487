#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "excision/path.hpp"
#include "excision/report.hpp"

namespace excision {

/// Malformed or unreadable path input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * CSV path: an optional `#` provenance line, the header `t,v`, then one
 * `t,v` row per node with 17 significant digits.
 */
inline void write_path_csv(std::ostream& os, const Path& p, const std::string& provenance_line = {})
{
    if (!provenance_line.empty()) os << "# " << provenance_line << '\n';
    os << "t,v\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        os << fmt17(p.time(i)) << ',' << fmt17(p.value(i)) << '\n';
    }
}

inline std::string path_csv(const Path& p, const std::string& provenance_line = {})
{
    std::ostringstream os;
    write_path_csv(os, p, provenance_line);
    return os.str();
}

inline Path read_path_csv(std::istream& is, PathKind kind = PathKind::free, double level = 0.0)
{
    std::vector<double> t;
    std::vector<double> v;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "t,v") throw InputError("path CSV: expected header 't,v' at line " + std::to_string(lineno));
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("path CSV: missing comma at line " + std::to_string(lineno));
        try {
            std::size_t used = 0;
            const std::string a = line.substr(0, comma);
            const std::string b = line.substr(comma + 1);
            t.push_back(std::stod(a, &used));
            if (used != a.size()) throw std::invalid_argument("trailing characters");
            v.push_back(std::stod(b, &used));
            if (used != b.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw InputError("path CSV: bad number at line " + std::to_string(lineno));
        }
    }
    if (!header) throw InputError("path CSV: empty input");
    try {
        return Path(std::move(t), std::move(v), kind, level);
    } catch (const std::exception& e) {
        throw InputError(std::string("path CSV: ") + e.what());
    }
}

/// Reads a path from a .json envelope or a CSV file, by extension.
inline Path read_path_file(const std::string& file, PathKind kind = PathKind::free, double level = 0.0)
{
    std::ifstream in(file);
    if (!in) throw InputError("cannot open input file: " + file);
    if (file.size() >= 5 && file.substr(file.size() - 5) == ".json") {
        try {
            Json j = Json::parse(in);
            if (j.contains("path")) j = j.at("path");
            Path p = path_from_json(j);
            return p.kind() == PathKind::free && kind != PathKind::free ? p.with_kind(kind, level) : p;
        } catch (const Json::exception& e) {
            throw InputError(std::string("path JSON: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("path JSON: ") + e.what());
        }
    }
    return read_path_csv(in, kind, level);
}

} // namespace excision
