#include "shapetest/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace shapetest {

namespace {

nlohmann::json complex_vector_json(const std::vector<Complex>& values) {
    nlohmann::json out = nlohmann::json::array();
    for (Complex z : values) out.push_back({z.real(), z.imag()});
    return out;
}

nlohmann::json real_matrix_json(const RealMatrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

const char* location_name(LocationKind kind) {
    return kind == LocationKind::Mean ? "mean" : "antimean";
}

std::string format_fixed(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

}  // namespace

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw EmptyFileError("cannot open file: " + path.string());
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    char chunk[4096];
    while (stream.read(chunk, sizeof(chunk)) || stream.gcount() > 0) {
        for (std::streamsize i = 0; i < stream.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 0x100000001B3ULL;
        }
        if (!stream) break;
    }
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(hash));
    return buffer;
}

std::vector<Complex> representative_of(const AmbientPoint& vw_point) {
    if (vw_point.descriptor().kind() != ManifoldKind::VeroneseWhitney)
        throw UnsupportedDescriptorError("representatives exist for shape points only");
    EigenDecomposition eigen = hermitian_eig(vw_point.matrix());
    const std::size_t n = eigen.eigenvalues.size();
    std::vector<Complex> rep(n);
    for (std::size_t i = 0; i < n; ++i) rep[i] = eigen.eigenvectors(i, n - 1);
    return rep;
}

std::vector<Complex> icon_landmarks(const std::vector<Complex>& representative) {
    std::vector<Complex> landmarks = helmert_expand(representative);
    if (landmarks.size() >= 2) {
        Complex edge = landmarks[1] - landmarks[0];
        double mag = std::abs(edge);
        if (mag > 1e-12) {
            Complex rotation = std::conj(edge) / mag;
            for (Complex& z : landmarks) z *= rotation;
        }
    }
    return landmarks;
}

nlohmann::json location_estimate_json(const LocationEstimate& est) {
    nlohmann::json out;
    out["type"] = "location_estimate";
    out["location"] = location_name(est.kind);
    out["n"] = est.n;
    if (est.point.descriptor().kind() == ManifoldKind::VeroneseWhitney) {
        out["k"] = est.point.descriptor().shape_k();
        std::vector<Complex> rep = representative_of(est.point);
        out["representative"] = complex_vector_json(rep);
        out["icon"] = complex_vector_json(icon_landmarks(rep));
    } else {
        out["sphere_point"] = est.point.vec();
    }
    if (est.eigen) {
        out["eigenvalues"] = est.eigen->eigenvalues;
        out["eigen_min_gap"] = est.eigen->min_gap;
    }
    out["anticovariance"] = real_matrix_json(est.anticov);
    return out;
}

nlohmann::json two_sample_report_json(const TwoSampleReport& report) {
    nlohmann::json out;
    out["type"] = "two_sample_report";
    out["statistic"] = report.statistic;
    out["df"] = report.df;
    out["pvalue"] = report.pvalue;
    out["alpha"] = report.alpha;
    out["reject"] = report.reject;
    out["location"] = location_name(report.location_kind);
    out["method"] = report.method == TestMethod::VWCoordinates ? "vw" : "generic";
    out["pooling"] =
        report.pooling == PoolingRule::AmbientAverage ? "ambient" : "projection";
    out["pseudo_inverse_used"] = report.pseudo_inverse_used;
    if (report.pooled_point.descriptor().kind() == ManifoldKind::VeroneseWhitney) {
        std::vector<Complex> rep = representative_of(report.pooled_point);
        out["pooled"] = {{"representative", complex_vector_json(rep)},
                         {"icon", complex_vector_json(icon_landmarks(rep))}};
    } else {
        out["pooled"] = {{"sphere_point", report.pooled_point.vec()}};
    }
    out["groups"] = nlohmann::json::array();
    for (const LocationEstimate* est : {&report.group_a, &report.group_b}) {
        nlohmann::json g;
        g["n"] = est->n;
        if (est->point.descriptor().kind() == ManifoldKind::VeroneseWhitney) {
            std::vector<Complex> rep = representative_of(est->point);
            g["representative"] = complex_vector_json(rep);
            g["icon"] = complex_vector_json(icon_landmarks(rep));
        } else {
            g["sphere_point"] = est->point.vec();
        }
        out["groups"].push_back(std::move(g));
    }
    return out;
}

nlohmann::json experiment_result_json(const ExperimentResult& result,
                                      const std::string& experiment) {
    nlohmann::json out;
    out["type"] = "experiment_result";
    out["experiment"] = experiment;
    out["replicates"] = result.replicates;
    out["rejections"] = result.rejections;
    out["errors"] = result.errors;
    out["empirical_level"] = result.empirical_level;
    out["per_replicate_stats"] = result.per_replicate_stats;  // NaN serializes to null
    out["wall_clock_seconds"] = result.wall_clock_seconds;
    out["seed"] = result.seed;
    return out;
}

nlohmann::json consistency_table_json(const std::vector<ConsistencyRow>& table,
                                      std::uint64_t seed) {
    nlohmann::json out;
    out["type"] = "experiment_result";
    out["experiment"] = "consistency";
    out["seed"] = seed;
    out["table"] = nlohmann::json::array();
    for (const ConsistencyRow& row : table)
        out["table"].push_back({{"n", row.n}, {"median_chord_error", row.median_chord_error}});
    return out;
}

nlohmann::json report_document(const std::string& command,
                               const std::vector<std::filesystem::path>& inputs,
                               nlohmann::json result, std::vector<std::string> warnings) {
    nlohmann::json doc;
    doc["schema_version"] = "1";
    doc["command"] = command;
    doc["inputs"] = nlohmann::json::array();
    for (const auto& path : inputs)
        doc["inputs"].push_back({{"path", path.string()}, {"digest", file_digest(path)}});
    doc["warnings"] = warnings;
    doc["result"] = std::move(result);
    return doc;
}

std::string render_icons_svg(const std::vector<IconSpec>& icons) {
    const double cell = 240.0, margin = 30.0, caption = 24.0;
    const double width = cell * static_cast<double>(icons.empty() ? 1 : icons.size());
    const double height = cell + caption;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_fixed(width) +
           "\" height=\"" + format_fixed(height) + "\" viewBox=\"0 0 " + format_fixed(width) +
           " " + format_fixed(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t idx = 0; idx < icons.size(); ++idx) {
        const IconSpec& icon = icons[idx];
        const double x0 = cell * static_cast<double>(idx);
        double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
        bool first = true;
        for (Complex z : icon.landmarks) {
            if (first) {
                min_x = max_x = z.real();
                min_y = max_y = z.imag();
                first = false;
            } else {
                min_x = std::min(min_x, z.real());
                max_x = std::max(max_x, z.real());
                min_y = std::min(min_y, z.imag());
                max_y = std::max(max_y, z.imag());
            }
        }
        const double span = std::max(std::max(max_x - min_x, max_y - min_y), 1e-9);
        const double scale = (cell - 2.0 * margin) / span;
        const double cx = 0.5 * (min_x + max_x), cy = 0.5 * (min_y + max_y);

        auto map_x = [&](double x) { return x0 + 0.5 * cell + (x - cx) * scale; };
        auto map_y = [&](double y) { return 0.5 * cell - (y - cy) * scale; };

        svg += "<g>\n<polygon points=\"";
        for (std::size_t i = 0; i < icon.landmarks.size(); ++i) {
            if (i > 0) svg += " ";
            svg += format_fixed(map_x(icon.landmarks[i].real())) + "," +
                   format_fixed(map_y(icon.landmarks[i].imag()));
        }
        svg += "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        for (std::size_t i = 0; i < icon.landmarks.size(); ++i) {
            const std::string px = format_fixed(map_x(icon.landmarks[i].real()));
            const std::string py = format_fixed(map_y(icon.landmarks[i].imag()));
            svg += "<circle cx=\"" + px + "\" cy=\"" + py + "\" r=\"3\" fill=\"black\"/>\n";
            svg += "<text x=\"" + format_fixed(map_x(icon.landmarks[i].real()) + 5.0) + "\" y=\"" +
                   format_fixed(map_y(icon.landmarks[i].imag()) - 5.0) +
                   "\" font-size=\"11\" font-family=\"sans-serif\">" + std::to_string(i + 1) +
                   "</text>\n";
        }
        svg += "<text x=\"" + format_fixed(x0 + 0.5 * cell) + "\" y=\"" +
               format_fixed(cell + 16.0) +
               "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
               icon.label + "</text>\n</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace shapetest
