#include "gaggam/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gaggam/errors.hpp"
#include "gaggam/serialization.hpp"

namespace gaggam {

namespace {

std::string fmt(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string cell(double value) { return fmt(value, 6); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

// Pixel mapping for one axis.
struct AxisScale {
  double lo = 0.0;
  double hi = 1.0;
  double px_lo = 0.0;
  double px_hi = 1.0;

  double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

constexpr double kSvgWidth = 640.0;
constexpr double kSvgHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 50.0;

std::string svg_header() {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgWidth
      << "\" height=\"" << kSvgHeight << "\" viewBox=\"0 0 " << kSvgWidth << " "
      << kSvgHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kSvgWidth << "\" height=\""
      << kSvgHeight << "\" fill=\"white\"/>\n";
  return out.str();
}

void draw_axes(std::ostringstream& out, const AxisScale& x, const AxisScale& y,
               const std::string& x_label, const std::string& y_label) {
  out << "<line x1=\"" << fmt(x.px_lo, 2) << "\" y1=\"" << fmt(y.px_lo, 2)
      << "\" x2=\"" << fmt(x.px_hi, 2) << "\" y2=\"" << fmt(y.px_lo, 2)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << fmt(x.px_lo, 2) << "\" y1=\"" << fmt(y.px_lo, 2)
      << "\" x2=\"" << fmt(x.px_lo, 2) << "\" y2=\"" << fmt(y.px_hi, 2)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = x.lo + (x.hi - x.lo) * t / 4.0;
    const double px = x.map(fx);
    out << "<line x1=\"" << fmt(px, 2) << "\" y1=\"" << fmt(y.px_lo, 2) << "\" x2=\""
        << fmt(px, 2) << "\" y2=\"" << fmt(y.px_lo + 4, 2) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px, 2) << "\" y=\"" << fmt(y.px_lo + 18, 2)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(fx, 3) << "</text>\n";
    const double fy = y.lo + (y.hi - y.lo) * t / 4.0;
    const double py = y.map(fy);
    out << "<line x1=\"" << fmt(x.px_lo - 4, 2) << "\" y1=\"" << fmt(py, 2)
        << "\" x2=\"" << fmt(x.px_lo, 2) << "\" y2=\"" << fmt(py, 2)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x.px_lo - 8, 2) << "\" y=\"" << fmt(py + 4, 2)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(fy, 3) << "</text>\n";
  }
  out << "<text x=\"" << fmt((x.px_lo + x.px_hi) / 2, 2) << "\" y=\""
      << fmt(kSvgHeight - 12, 2)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt((y.px_lo + y.px_hi) / 2, 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt((y.px_lo + y.px_hi) / 2, 2) << ")\">" << y_label << "</text>\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

}  // namespace

bool RunRecord::operator==(const RunRecord& other) const {
  // wall_clock_seconds is deliberately excluded: it is not serialized.
  return seed == other.seed && population_size == other.population_size &&
         generations == other.generations &&
         crossover_prob == other.crossover_prob && k_folds == other.k_folds &&
         test_fraction == other.test_fraction &&
         target_column == other.target_column && knee == other.knee &&
         best_by_rmse == other.best_by_rmse &&
         best_by_penalty == other.best_by_penalty &&
         knee_test_rmse == other.knee_test_rmse &&
         best_by_rmse_test_rmse == other.best_by_rmse_test_rmse &&
         best_by_penalty_test_rmse == other.best_by_penalty_test_rmse &&
         cart_test_rmse == other.cart_test_rmse &&
         baseline_gam_test_rmse == other.baseline_gam_test_rmse &&
         baseline_gam_penalty == other.baseline_gam_penalty &&
         front == other.front && knee_chromosome == other.knee_chromosome &&
         best_by_rmse_chromosome == other.best_by_rmse_chromosome &&
         best_by_penalty_chromosome == other.best_by_penalty_chromosome;
}

double score_on_test(const FittedGam& model, const Dataset& test) {
  return rmse(predict(model, test.features), test.target);
}

double score_on_test(const CartNode& tree, const Dataset& test) {
  return rmse(predict_cart(tree, test.features), test.target);
}

void emit_tables(const std::vector<RunRecord>& records, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  {
    std::ofstream out = open_out(out_dir + "/rmse_table.csv");
    out << "seed,gam_rmse,gam_knee,gam_penalty,cart,baseline_gam\n";
    for (const RunRecord& r : records) {
      out << r.seed << ',' << cell(r.best_by_rmse_test_rmse) << ','
          << cell(r.knee_test_rmse) << ',' << cell(r.best_by_penalty_test_rmse)
          << ',' << cell(r.cart_test_rmse) << ',' << cell(r.baseline_gam_test_rmse)
          << '\n';
    }
  }
  {
    std::ofstream out = open_out(out_dir + "/penalty_table.csv");
    out << "seed,baseline,knee,best_by_rmse,best_by_penalty\n";
    for (const RunRecord& r : records) {
      out << r.seed << ',' << cell(r.baseline_gam_penalty) << ','
          << cell(r.knee.penalty) << ',' << cell(r.best_by_rmse.penalty) << ','
          << cell(r.best_by_penalty.penalty) << '\n';
    }
  }
  nlohmann::json combined = nlohmann::json::array();
  for (const RunRecord& r : records) combined.push_back(run_record_to_json(r));
  write_json_file(combined, out_dir + "/results.json");
}

std::pair<double, double> plot_axis_limits(double lo, double hi) {
  const double span = hi - lo;
  const double pad = span > 0.0 ? 0.05 * span : 0.05 * std::max(std::abs(hi), 1.0);
  return {lo - pad, hi + pad};
}

void emit_pareto_plot(const std::vector<Individual>& front,
                      const FrontSelection& selection, const std::string& out_path) {
  if (front.empty()) throw std::invalid_argument("cannot plot an empty front");

  double pen_lo = front[0].objectives.penalty, pen_hi = pen_lo;
  double rmse_lo = front[0].objectives.rmse, rmse_hi = rmse_lo;
  for (const Individual& ind : front) {
    pen_lo = std::min(pen_lo, ind.objectives.penalty);
    pen_hi = std::max(pen_hi, ind.objectives.penalty);
    rmse_lo = std::min(rmse_lo, ind.objectives.rmse);
    rmse_hi = std::max(rmse_hi, ind.objectives.rmse);
  }
  const auto [x_lo, x_hi] = plot_axis_limits(pen_lo, pen_hi);
  const auto [y_lo, y_hi] = plot_axis_limits(rmse_lo, rmse_hi);

  const AxisScale x{x_lo, x_hi, kMarginLeft, kSvgWidth - kMarginRight};
  const AxisScale y{y_lo, y_hi, kSvgHeight - kMarginBottom, kMarginTop};

  std::ostringstream out;
  out << svg_header();
  draw_axes(out, x, y, "Complexity penalty", "RMSE");

  for (const Individual& ind : front) {
    out << "<circle class=\"pt\" cx=\"" << fmt(x.map(ind.objectives.penalty), 2)
        << "\" cy=\"" << fmt(y.map(ind.objectives.rmse), 2)
        << "\" r=\"3.5\" fill=\"#4878a8\"/>\n";
  }

  const auto diamond = [&](const Objectives& o, const char* cls, const char* color) {
    const double cx = x.map(o.penalty);
    const double cy = y.map(o.rmse);
    out << "<path class=\"" << cls << "\" d=\"M" << fmt(cx, 2) << " " << fmt(cy - 7, 2)
        << " L" << fmt(cx + 7, 2) << " " << fmt(cy, 2) << " L" << fmt(cx, 2) << " "
        << fmt(cy + 7, 2) << " L" << fmt(cx - 7, 2) << " " << fmt(cy, 2)
        << " Z\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
  };
  const auto square = [&](const Objectives& o, const char* cls, const char* color) {
    out << "<rect class=\"" << cls << "\" x=\"" << fmt(x.map(o.penalty) - 6, 2)
        << "\" y=\"" << fmt(y.map(o.rmse) - 6, 2)
        << "\" width=\"12\" height=\"12\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
  };
  const auto triangle = [&](const Objectives& o, const char* cls, const char* color) {
    const double cx = x.map(o.penalty);
    const double cy = y.map(o.rmse);
    out << "<path class=\"" << cls << "\" d=\"M" << fmt(cx, 2) << " " << fmt(cy - 7, 2)
        << " L" << fmt(cx + 7, 2) << " " << fmt(cy + 6, 2) << " L" << fmt(cx - 7, 2)
        << " " << fmt(cy + 6, 2) << " Z\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
  };

  diamond(selection.knee.objectives, "sel-knee", "#2ca02c");
  square(selection.best_by_rmse.objectives, "sel-rmse", "#d62728");
  triangle(selection.best_by_penalty.objectives, "sel-penalty", "#9467bd");

  const double lx = kMarginLeft + 12;
  out << "<text x=\"" << fmt(lx + 14, 2) << "\" y=\"" << fmt(kMarginTop + 16, 2)
      << "\" font-size=\"12\">knee</text>\n"
      << "<text x=\"" << fmt(lx + 14, 2) << "\" y=\"" << fmt(kMarginTop + 34, 2)
      << "\" font-size=\"12\">best by RMSE</text>\n"
      << "<text x=\"" << fmt(lx + 14, 2) << "\" y=\"" << fmt(kMarginTop + 52, 2)
      << "\" font-size=\"12\">best by penalty</text>\n";
  out << "<path class=\"lg\" d=\"M" << fmt(lx, 2) << " " << fmt(kMarginTop + 6, 2)
      << " L" << fmt(lx + 5, 2) << " " << fmt(kMarginTop + 11, 2) << " L" << fmt(lx, 2)
      << " " << fmt(kMarginTop + 16, 2) << " L" << fmt(lx - 5, 2) << " "
      << fmt(kMarginTop + 11, 2) << " Z\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
  out << "<rect class=\"lg\" x=\"" << fmt(lx - 5, 2) << "\" y=\""
      << fmt(kMarginTop + 24, 2)
      << "\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  out << "<path class=\"lg\" d=\"M" << fmt(lx, 2) << " " << fmt(kMarginTop + 42, 2)
      << " L" << fmt(lx + 5, 2) << " " << fmt(kMarginTop + 52, 2) << " L"
      << fmt(lx - 5, 2) << " " << fmt(kMarginTop + 52, 2)
      << " Z\" fill=\"none\" stroke=\"#9467bd\" stroke-width=\"2\"/>\n";

  out << "</svg>\n";
  write_file(out_path, out.str());
}

void emit_partial_dependence_plot(const FittedGam& model, int feature_index,
                                  const std::string& out_path,
                                  const std::string& feature_name) {
  const TermSpec& term = model.spec.terms.at(static_cast<std::size_t>(feature_index));
  const std::string title =
      feature_name.empty() ? "feature " + std::to_string(feature_index) : feature_name;

  std::ostringstream out;
  out << svg_header();

  if (!term.active()) {
    out << "<text class=\"inactive\" x=\"" << fmt(kSvgWidth / 2, 2) << "\" y=\""
        << fmt(kSvgHeight / 2, 2)
        << "\" font-size=\"24\" text-anchor=\"middle\" fill=\"#888888\">Inactive</text>\n";
    out << "<text x=\"" << fmt(kSvgWidth / 2, 2) << "\" y=\""
        << fmt(kSvgHeight / 2 + 28, 2)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << title << "</text>\n";
    out << "</svg>\n";
    write_file(out_path, out.str());
    return;
  }

  const PartialDependence pd = partial_dependence(model, feature_index, kCiGridSize);

  double y_min = pd.ci_lower.minCoeff();
  double y_max = pd.ci_upper.maxCoeff();
  if (!std::isfinite(y_min) || !std::isfinite(y_max)) {
    y_min = pd.effect.minCoeff();
    y_max = pd.effect.maxCoeff();
  }
  const auto [x_lo, x_hi] = plot_axis_limits(pd.grid(0), pd.grid(pd.grid.size() - 1));
  const auto [y_lo, y_hi] = plot_axis_limits(y_min, y_max);

  const AxisScale x{x_lo, x_hi, kMarginLeft, kSvgWidth - kMarginRight};
  const AxisScale y{y_lo, y_hi, kSvgHeight - kMarginBottom, kMarginTop};
  draw_axes(out, x, y, title, "Partial effect");

  const bool band_ok = pd.ci_lower.allFinite() && pd.ci_upper.allFinite();
  if (band_ok) {
    out << "<polygon class=\"band\" fill=\"#4878a8\" fill-opacity=\"0.25\" "
           "stroke=\"none\" points=\"";
    for (Eigen::Index i = 0; i < pd.grid.size(); ++i) {
      out << fmt(x.map(pd.grid(i)), 2) << ',' << fmt(y.map(pd.ci_upper(i)), 2) << ' ';
    }
    for (Eigen::Index i = pd.grid.size() - 1; i >= 0; --i) {
      out << fmt(x.map(pd.grid(i)), 2) << ',' << fmt(y.map(pd.ci_lower(i)), 2);
      if (i > 0) out << ' ';
    }
    out << "\"/>\n";
  }

  // A linear effect is a straight segment, so its endpoints suffice.
  out << "<polyline class=\"effect\" fill=\"none\" stroke=\"#1f3d5c\" "
         "stroke-width=\"2\" points=\"";
  if (term.kind == TermKind::kLinear) {
    const Eigen::Index last = pd.grid.size() - 1;
    out << fmt(x.map(pd.grid(0)), 2) << ',' << fmt(y.map(pd.effect(0)), 2) << ' '
        << fmt(x.map(pd.grid(last)), 2) << ',' << fmt(y.map(pd.effect(last)), 2);
  } else {
    for (Eigen::Index i = 0; i < pd.grid.size(); ++i) {
      out << fmt(x.map(pd.grid(i)), 2) << ',' << fmt(y.map(pd.effect(i)), 2);
      if (i + 1 < pd.grid.size()) out << ' ';
    }
  }
  out << "\"/>\n</svg>\n";
  write_file(out_path, out.str());
}

}  // namespace gaggam
