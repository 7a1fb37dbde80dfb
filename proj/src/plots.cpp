#include "evopipe/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "evopipe/errors.hpp"

namespace evopipe {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t max_fields) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' && out.size() + 1 < max_fields) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 64, kRight = 24, kTop = 40, kBottom = 52;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

struct Axis {
    double lo = 0.0, hi = 1.0;

    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void init(double v) { lo = hi = v; }
    void pad() {
        if (hi <= lo) {
            hi = lo + 1.0;
            lo -= 1.0;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

struct Chart {
    std::ostringstream svg;
    Axis x, y;

    double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const { return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom); }

    void open(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
        svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"15\">" << title << "</text>\n";
        svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
            << "</text>\n";
        svg << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
            << (kTop + kHeight - kBottom) / 2 << ")\">" << ylabel << "</text>\n";
        // frame + ticks
        svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
            << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double fx = x.lo + (x.hi - x.lo) * t / 4.0;
            const double fy = y.lo + (y.hi - y.lo) * t / 4.0;
            svg << "<line x1=\"" << px(fx) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px(fx)
                << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"#444\"/>\n";
            svg << "<text x=\"" << px(fx) << "\" y=\"" << kHeight - kBottom + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(fx)
                << "</text>\n";
            svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << kLeft << "\" y2=\""
                << py(fy) << "\" stroke=\"#444\"/>\n";
            svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(fy) + 4
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(fy)
                << "</text>\n";
        }
    }

    void band(const std::vector<double>& xs, const std::vector<double>& lo, const std::vector<double>& hi,
              const char* color) {
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) svg << px(xs[i]) << ',' << py(hi[i]) << ' ';
        for (std::size_t i = xs.size(); i-- > 0;) svg << px(xs[i]) << ',' << py(lo[i]) << ' ';
        svg << "\"/>\n";
    }

    void line(const std::vector<double>& xs, const std::vector<double>& ys, const char* color) {
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) svg << px(xs[i]) << ',' << py(ys[i]) << ' ';
        svg << "\"/>\n";
    }

    void dots(const std::vector<std::pair<double, double>>& pts, const char* color) {
        for (const auto& [vx, vy] : pts) {
            svg << "<circle cx=\"" << px(vx) << "\" cy=\"" << py(vy) << "\" r=\"4\" fill=\"" << color
                << "\" fill-opacity=\"0.85\"/>\n";
        }
    }

    void legend(const std::vector<std::string>& labels) {
        double ly = kTop + 14;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const double lx = kWidth - kRight - 190;
            svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22 << "\" y2=\"" << ly - 4
                << "\" stroke=\"" << kPalette[i % 7] << "\" stroke-width=\"3\"/>\n";
            svg << "<text x=\"" << lx + 28 << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"12\">" << labels[i] << "</text>\n";
            ly += 16;
        }
    }

    std::string close() {
        svg << "</svg>\n";
        return svg.str();
    }
};

struct VariantTraces {
    std::string variant;
    std::vector<RunTrace> reps;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open \"" + path.string() + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Per-generation min/max/median across repetitions, clipped to the shortest.
struct BandData {
    std::vector<double> xs, lo, hi, med;
};

BandData band_of(const std::vector<RunTrace>& reps, double GenerationRecord::* field) {
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const RunTrace& t : reps) len = std::min(len, t.records.size());
    BandData out;
    if (len == std::numeric_limits<std::size_t>::max()) return out;
    for (std::size_t g = 0; g < len; ++g) {
        std::vector<double> vals;
        vals.reserve(reps.size());
        for (const RunTrace& t : reps) vals.push_back(t.records[g].*field);
        std::sort(vals.begin(), vals.end());
        out.xs.push_back(static_cast<double>(g + 1));
        out.lo.push_back(vals.front());
        out.hi.push_back(vals.back());
        const std::size_t n = vals.size();
        out.med.push_back(n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]));
    }
    return out;
}

void render_convergence(const std::vector<VariantTraces>& groups, double GenerationRecord::* field,
                        const std::string& title, const std::string& ylabel, const fs::path& out) {
    Chart chart;
    bool first = true;
    std::vector<BandData> bands;
    for (const auto& group : groups) {
        bands.push_back(band_of(group.reps, field));
        for (std::size_t i = 0; i < bands.back().xs.size(); ++i) {
            if (first) {
                chart.x.init(bands.back().xs[i]);
                chart.y.init(bands.back().lo[i]);
                first = false;
            }
            chart.x.expand(bands.back().xs[i]);
            chart.y.expand(bands.back().lo[i]);
            chart.y.expand(bands.back().hi[i]);
        }
    }
    chart.x.pad();
    chart.y.pad();
    chart.open(title, "generation", ylabel);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (bands[i].xs.empty()) continue;
        chart.band(bands[i].xs, bands[i].lo, bands[i].hi, kPalette[i % 7]);
        chart.line(bands[i].xs, bands[i].med, kPalette[i % 7]);
        labels.push_back(groups[i].variant);
    }
    chart.legend(labels);
    std::ofstream f(out, std::ios::binary);
    f << chart.close();
}

}  // namespace

RunTrace trace_from_csv(const std::string& text) {
    RunTrace trace;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line, 9);
        if (cells.size() != 9) throw DataError("malformed trace row: " + line);
        GenerationRecord r;
        r.generation = std::stoi(cells[0]);
        r.best_q = std::stod(cells[1]);
        r.hv = std::stod(cells[2]);
        r.mu = std::stoi(cells[3]);
        r.lambda = std::stoi(cells[4]);
        r.cross_rate = std::stod(cells[5]);
        r.mut_rate = std::stod(cells[6]);
        r.max_depth = std::stoi(cells[7]);
        r.elapsed_s = std::stod(cells[8]);
        trace.records.push_back(r);
    }
    return trace;
}

void render_plots(const std::string& results_dir) {
    const fs::path dir(results_dir);
    if (!fs::exists(dir / "finals.csv")) {
        throw DataError("\"" + results_dir + "\" has no finals.csv; run an experiment first");
    }

    // variant -> best rep (smallest minimized q) for the frontier scatter.
    std::map<std::string, std::pair<int, double>> best_rep;
    std::vector<std::string> variant_order;
    {
        std::istringstream in(read_file(dir / "finals.csv"));
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv_line(line, 9);
            const std::string& variant = cells[0];
            const int rep = std::stoi(cells[1]);
            const double q = std::stod(cells[4]);
            if (std::find(variant_order.begin(), variant_order.end(), variant) == variant_order.end()) {
                variant_order.push_back(variant);
            }
            auto it = best_rep.find(variant);
            if (it == best_rep.end() || q < it->second.second) best_rep[variant] = {rep, q};
        }
    }

    std::vector<VariantTraces> groups;
    for (const std::string& variant : variant_order) {
        VariantTraces group;
        group.variant = variant;
        for (int rep = 0;; ++rep) {
            std::string tag = std::to_string(rep);
            if (tag.size() < 2) tag.insert(tag.begin(), '0');
            const fs::path path = dir / "traces" / (variant + "_rep" + tag + ".csv");
            if (!fs::exists(path)) break;
            group.reps.push_back(trace_from_csv(read_file(path)));
        }
        if (!group.reps.empty()) groups.push_back(std::move(group));
    }

    if (!groups.empty()) {
        render_convergence(groups, &GenerationRecord::best_q, "Quality objective convergence",
                           "best quality objective (minimized)", dir / "quality_convergence.svg");
        render_convergence(groups, &GenerationRecord::hv, "Hypervolume convergence",
                           "archive hypervolume (normalized)", dir / "hv_convergence.svg");
    }

    // Final Pareto frontier of each variant's best repetition.
    Chart scatter;
    std::vector<std::vector<std::pair<double, double>>> fronts;
    std::vector<std::string> labels;
    bool first = true;
    for (const std::string& variant : variant_order) {
        auto it = best_rep.find(variant);
        if (it == best_rep.end()) continue;
        std::string tag = std::to_string(it->second.first);
        if (tag.size() < 2) tag.insert(tag.begin(), '0');
        const fs::path path = dir / "pareto" / (variant + "_rep" + tag + ".csv");
        if (!fs::exists(path)) continue;
        std::istringstream in(read_file(path));
        std::string line;
        std::getline(in, line);
        std::vector<std::pair<double, double>> pts;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv_line(line, 3);
            const double q = std::stod(cells[0]);
            const double s = std::stod(cells[1]);
            pts.emplace_back(q, s);
            if (first) {
                scatter.x.init(q);
                scatter.y.init(s);
                first = false;
            }
            scatter.x.expand(q);
            scatter.y.expand(s);
        }
        fronts.push_back(std::move(pts));
        labels.push_back(variant);
    }
    if (!fronts.empty()) {
        scatter.x.pad();
        scatter.y.pad();
        scatter.open("Final Pareto frontiers (best repetition)", "quality objective (minimized)",
                     "structural complexity (graph size)");
        for (std::size_t i = 0; i < fronts.size(); ++i) scatter.dots(fronts[i], kPalette[i % 7]);
        scatter.legend(labels);
        std::ofstream f(dir / "pareto_front.svg", std::ios::binary);
        f << scatter.close();
    }
}

}  // namespace evopipe
