#include "shapetest/landmark_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace shapetest {

namespace {

struct Line {
    std::string text;
    std::size_t number;  // 1-based
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::string current;
    std::size_t number = 1;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back({current, number++});
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty() && current.back() == '\r') current.pop_back();
    if (!current.empty()) lines.push_back({current, number});
    return lines;
}

std::string trim(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

bool is_blank(const std::string& s) { return trim(s).empty(); }

double parse_double(const std::string& token, std::size_t line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("expected a decimal number, got '" + token + "'", line);
    return value;
}

std::vector<std::string> split_whitespace(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream stream(s);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : s) {
        if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(trim(current));
    return fields;
}

bool starts_with_key(const std::string& line, const char* key) {
    std::size_t len = 0;
    while (key[len] != '\0') ++len;
    if (line.size() < len) return false;
    for (std::size_t i = 0; i < len; ++i)
        if (std::toupper(static_cast<unsigned char>(line[i])) != key[i]) return false;
    return true;
}

Complex parse_xy(const std::string& line, std::size_t number) {
    std::vector<std::string> tokens = split_whitespace(line);
    if (tokens.size() != 2)
        throw ParseError("expected two coordinates per line", number);
    return Complex(parse_double(tokens[0], number), parse_double(tokens[1], number));
}

void check_consistent_k(const std::vector<KAdConfig>& configs) {
    if (configs.empty()) return;
    const std::size_t k = configs.front().k();
    std::string offenders;
    for (const KAdConfig& c : configs)
        if (c.k() != k) offenders += (offenders.empty() ? "" : ", ") + c.id;
    if (!offenders.empty())
        throw InconsistentKError("configurations disagree on the landmark count: " + offenders);
}

LandmarkFile parse_blocks(const std::vector<Line>& lines) {
    LandmarkFile file;
    file.format = LandmarkFormat::Blocks;
    std::vector<Complex> current;
    std::size_t config_index = 1;
    auto flush = [&]() {
        if (current.empty()) return;
        KAdConfig config;
        config.id = std::to_string(config_index++);
        config.landmarks = std::move(current);
        current = {};
        file.configurations.push_back(std::move(config));
    };
    for (const Line& line : lines) {
        if (is_blank(line.text)) {
            flush();
            continue;
        }
        current.push_back(parse_xy(line.text, line.number));
    }
    flush();
    if (file.configurations.empty()) throw EmptyFileError("no configurations found");
    check_consistent_k(file.configurations);
    file.k = file.configurations.front().k();
    return file;
}

LandmarkFile parse_csv(const std::vector<Line>& lines) {
    LandmarkFile file;
    file.format = LandmarkFormat::CSV;
    std::size_t row = 0;
    while (row < lines.size() && is_blank(lines[row].text)) ++row;
    if (row == lines.size()) throw EmptyFileError("no configurations found");
    {
        std::vector<std::string> header = split_commas(lines[row].text);
        if (header.size() != 4 || header[0] != "config" || header[1] != "landmark" ||
            header[2] != "x" || header[3] != "y")
            throw ParseError("expected header 'config,landmark,x,y'", lines[row].number);
    }
    // Preserve first-appearance order of configurations.
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<long, Complex>>> rows;
    for (++row; row < lines.size(); ++row) {
        if (is_blank(lines[row].text)) continue;
        std::vector<std::string> fields = split_commas(lines[row].text);
        if (fields.size() != 4) throw ParseError("expected four comma-separated fields",
                                                 lines[row].number);
        long landmark = 0;
        {
            const std::string& token = fields[1];
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), landmark);
            if (ec != std::errc() || ptr != token.data() + token.size())
                throw ParseError("expected an integer landmark index, got '" + token + "'",
                                 lines[row].number);
        }
        Complex z(parse_double(fields[2], lines[row].number),
                  parse_double(fields[3], lines[row].number));
        if (rows.find(fields[0]) == rows.end()) order.push_back(fields[0]);
        rows[fields[0]].push_back({landmark, z});
    }
    if (order.empty()) throw EmptyFileError("no configurations found");
    for (const std::string& id : order) {
        auto& entries = rows[id];
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        KAdConfig config;
        config.id = id;
        for (const auto& [index, z] : entries) config.landmarks.push_back(z);
        file.configurations.push_back(std::move(config));
    }
    check_consistent_k(file.configurations);
    file.k = file.configurations.front().k();
    return file;
}

LandmarkFile parse_tps(const std::vector<Line>& lines) {
    LandmarkFile file;
    file.format = LandmarkFormat::TPS;
    std::size_t config_index = 1;
    std::size_t row = 0;
    while (row < lines.size()) {
        const std::string text = trim(lines[row].text);
        if (text.empty()) {
            ++row;
            continue;
        }
        if (!starts_with_key(text, "LM=")) {
            file.warnings.push_back("skipped TPS line " + std::to_string(lines[row].number) +
                                    ": '" + text + "'");
            ++row;
            continue;
        }
        std::size_t count = 0;
        {
            const std::string token = trim(text.substr(3));
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), count);
            if (ec != std::errc() || ptr != token.data() + token.size())
                throw ParseError("malformed LM= record", lines[row].number);
        }
        KAdConfig config;
        config.id = std::to_string(config_index);
        ++row;
        for (std::size_t taken = 0; taken < count; ++row) {
            if (row >= lines.size())
                throw ParseError("LM= record promises more coordinate lines than remain",
                                 lines.empty() ? 0 : lines.back().number);
            if (is_blank(lines[row].text)) continue;
            config.landmarks.push_back(parse_xy(trim(lines[row].text), lines[row].number));
            ++taken;
        }
        // Trailing keys of this record: ID= names it, anything else warns.
        while (row < lines.size()) {
            const std::string tail = trim(lines[row].text);
            if (tail.empty()) {
                ++row;
                continue;
            }
            if (starts_with_key(tail, "LM=")) break;
            if (starts_with_key(tail, "ID=")) {
                config.id = trim(tail.substr(3));
            } else {
                file.warnings.push_back("ignored TPS key at line " +
                                        std::to_string(lines[row].number) + ": '" + tail + "'");
            }
            ++row;
        }
        ++config_index;
        file.configurations.push_back(std::move(config));
    }
    if (file.configurations.empty()) throw EmptyFileError("no configurations found");
    check_consistent_k(file.configurations);
    file.k = file.configurations.front().k();
    return file;
}

LandmarkFormat detect_format(const std::vector<Line>& lines) {
    for (const Line& line : lines) {
        const std::string text = trim(line.text);
        if (text.empty()) continue;
        if (starts_with_key(text, "LM=")) return LandmarkFormat::TPS;
        if (text.rfind("config,", 0) == 0) return LandmarkFormat::CSV;
        return LandmarkFormat::Blocks;
    }
    throw EmptyFileError("file contains no data");
}

}  // namespace

LandmarkFile parse_landmarks_text(const std::string& text,
                                  std::optional<LandmarkFormat> format_hint) {
    std::vector<Line> lines = split_lines(text);
    const LandmarkFormat format = format_hint ? *format_hint : detect_format(lines);
    switch (format) {
        case LandmarkFormat::Blocks:
            return parse_blocks(lines);
        case LandmarkFormat::CSV:
            return parse_csv(lines);
        case LandmarkFormat::TPS:
        default:
            return parse_tps(lines);
    }
}

LandmarkFile parse_landmarks(const std::filesystem::path& path,
                             std::optional<LandmarkFormat> format_hint) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw EmptyFileError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return parse_landmarks_text(buffer.str(), format_hint);
}

}  // namespace shapetest
