#include "lfr/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace lfr {

namespace {

std::string trim(const std::string& s) {
    auto b = s.begin(), e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return {b, e};
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected a number, got '" + s +
                         "'");
    }
}

int parse_int(const std::string& s, const std::string& path, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected an integer, got '" +
                         s + "'");
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return lines;
}

bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

std::vector<double> read_time_csv(const std::string& path) {
    const auto lines = read_lines(path);
    std::vector<double> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string t = trim(lines[i]);
        if (t.empty()) continue;
        if (i == 0 && !looks_numeric(t)) {
            if (t != "time") throw ParseError(path + ": expected a 'time' header or a number");
            continue;
        }
        const auto fields = split_fields(t);
        if (fields.size() != 1)
            throw ParseError(path + ":" + std::to_string(i + 1) + ": expected one column");
        out.push_back(parse_double(fields[0], path, i + 1));
    }
    if (out.empty()) throw ParseError(path + ": no data rows");
    return out;
}

CensoredCsv read_censored_csv(const std::string& path) {
    const auto lines = read_lines(path);
    CensoredCsv out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string t = trim(lines[i]);
        if (t.empty()) continue;
        const auto fields = split_fields(t);
        if (i == 0 && !fields.empty() && !looks_numeric(fields[0])) {
            if (fields.size() != 2 || fields[0] != "time" || fields[1] != "gap")
                throw ParseError(path + ": expected a 'time,gap' header or numbers");
            continue;
        }
        if (fields.size() != 2)
            throw ParseError(path + ":" + std::to_string(i + 1) + ": expected time,gap columns");
        out.times.push_back(parse_double(fields[0], path, i + 1));
        out.gaps.push_back(parse_int(fields[1], path, i + 1));
    }
    if (out.times.empty()) throw ParseError(path + ": no data rows");
    return out;
}

CensoringScheme read_scheme_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    CensoringScheme s;
    try {
        s.n = j.at("n").get<int>();
        s.r = j.at("r").get<int>();
        s.T = j.at("T").get<double>();
        if (j.contains("removals")) s.removal_pattern = j["removals"].get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return s;
}

MhcSample sample_from_censored(const CensoredCsv& csv, int n) {
    MhcSample s;
    s.times = csv.times;
    s.gaps = csv.gaps;
    const int a_m = static_cast<int>(csv.times.size()) +
                    std::accumulate(csv.gaps.begin(), csv.gaps.end(), 0);
    s.n = n > 0 ? n : a_m;
    if (s.n < a_m)
        throw ParseError("censored sample implies more units than the scheme's n");
    s.case_tag = CaseTag::case_i;
    s.case_count = static_cast<int>(csv.times.size());
    return s;
}

}  // namespace lfr
