#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "excision/path.hpp"
#include "excision/transforms.hpp"

namespace excision {

/**
 * Figure of an excision: the source path, its envelope (two-sided maximum for
 * bridges, running maximum otherwise), excursion regions shaded by fate, the
 * argmax marker and the concatenated output underneath. Fixed 960x540
 * viewBox; coordinates printed with two decimals so output is byte-stable.
 */
class SvgFigure {
public:
    static constexpr double kWidth = 960.0;
    static constexpr double kHeight = 540.0;

    SvgFigure(const Path& source, const TransformOutput& out, std::string title = {})
        : src_{source}, out_{out}, title_{std::move(title)}
    {
        lo_ = std::min({src_.min_value(), out_.excised.min_value(), 0.0});
        hi_ = std::max({src_.max_value(), out_.excised.max_value(), lo_ + 1e-12});
        const double pad = 0.06 * (hi_ - lo_);
        lo_ -= pad;
        hi_ += pad;
        t_end_ = std::max(src_.horizon(), out_.excised.horizon());
    }

    std::string render() const
    {
        std::ostringstream s;
        s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 960 540\" width=\"960\" height=\"540\">\n";
        s << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
        if (!title_.empty()) {
            s << "<text x=\"480\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
              << escape(title_) << "</text>\n";
        }
        axes(s);
        for (const auto& r : out_.records) region(s, r);
        s << "<polyline class=\"envelope\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.2\" "
             "stroke-dasharray=\"6 3\" points=\""
          << points(envelope()) << "\"/>\n";
        s << "<polyline class=\"path\" fill=\"none\" stroke=\"#1f3b73\" stroke-width=\"1.2\" points=\""
          << points(src_) << "\"/>\n";
        s << "<polyline class=\"excised-output\" fill=\"none\" stroke=\"#2a8c4a\" stroke-width=\"1.6\" points=\""
          << points(out_.excised) << "\"/>\n";
        if (src_.kind() == PathKind::bridge) {
            const double mx = px(out_.argmax_time);
            s << "<line class=\"argmax\" x1=\"" << num(mx) << "\" y1=\"" << num(py(hi_)) << "\" x2=\"" << num(mx)
              << "\" y2=\"" << num(py(lo_)) << "\" stroke=\"#000000\" stroke-width=\"0.8\"/>\n";
            s << "<text x=\"" << num(mx + 4.0) << "\" y=\"" << num(py(hi_) + 14.0)
              << "\" font-family=\"sans-serif\" font-size=\"12\">&#956;</text>\n";
        }
        legend(s);
        s << "</svg>\n";
        return s.str();
    }

    std::size_t excised_regions() const
    {
        return static_cast<std::size_t>(std::count_if(out_.records.begin(), out_.records.end(),
                                                       [](const ExcursionRecord& r) { return r.excised; }));
    }

private:
    static constexpr double kLeft = 60.0;
    static constexpr double kRight = 930.0;
    static constexpr double kTop = 40.0;
    static constexpr double kBottom = 500.0;

    double px(double t) const { return kLeft + (kRight - kLeft) * t / t_end_; }
    double py(double v) const { return kBottom - (kBottom - kTop) * (v - lo_) / (hi_ - lo_); }

    static std::string num(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        std::string r = buf;
        return r == "-0.00" ? "0.00" : r;
    }

    static std::string escape(const std::string& in)
    {
        std::string o;
        for (char c : in) {
            switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
            }
        }
        return o;
    }

    std::string points(const Path& p) const
    {
        std::string o;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) o += ' ';
            o += num(px(p.time(i))) + "," + num(py(p.value(i)));
        }
        return o;
    }

    Path envelope() const
    {
        if (src_.kind() == PathKind::bridge) return two_sided_max(src_);
        std::vector<double> v(src_.values().begin(), src_.values().end());
        for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
        return Path(std::vector<double>(src_.times().begin(), src_.times().end()), std::move(v));
    }

    void region(std::ostringstream& s, const ExcursionRecord& r) const
    {
        std::string pts = num(px(r.g)) + "," + num(py(r.level));
        pts += ' ' + num(px(r.g)) + "," + num(py(src_.at(r.g)));
        for (std::size_t i = 0; i < src_.size(); ++i) {
            const double t = src_.time(i);
            if (t > r.g && t < r.d) pts += ' ' + num(px(t)) + "," + num(py(src_.value(i)));
        }
        pts += ' ' + num(px(r.d)) + "," + num(py(src_.at(r.d)));
        pts += ' ' + num(px(r.d)) + "," + num(py(r.level));
        if (r.excised) {
            s << "<polygon class=\"excised\" fill=\"#d62728\" fill-opacity=\"0.35\" stroke=\"none\" points=\"" << pts
              << "\"/>\n";
        } else {
            s << "<polygon class=\"kept\" fill=\"#1f77b4\" fill-opacity=\"0.18\" stroke=\"none\" points=\"" << pts
              << "\"/>\n";
        }
    }

    void axes(std::ostringstream& s) const
    {
        s << "<line x1=\"60.00\" y1=\"500.00\" x2=\"930.00\" y2=\"500.00\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        s << "<line x1=\"60.00\" y1=\"40.00\" x2=\"60.00\" y2=\"500.00\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        if (lo_ < 0.0 && hi_ > 0.0) {
            s << "<line class=\"zero\" x1=\"60.00\" y1=\"" << num(py(0.0)) << "\" x2=\"930.00\" y2=\"" << num(py(0.0))
              << "\" stroke=\"#999999\" stroke-width=\"0.6\"/>\n";
        }
        for (int k = 0; k <= 4; ++k) {
            const double t = t_end_ * k / 4.0;
            s << "<text x=\"" << num(px(t)) << "\" y=\"518\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                 "font-size=\"11\">"
              << num(t) << "</text>\n";
            const double v = lo_ + (hi_ - lo_) * k / 4.0;
            s << "<text x=\"54\" y=\"" << num(py(v) + 4.0)
              << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v) << "</text>\n";
        }
    }

    static void legend(std::ostringstream& s)
    {
        struct Item {
            const char* label;
            const char* swatch;
        };
        const Item items[] = {
            {"path", "<line x1=\"0\" y1=\"6\" x2=\"18\" y2=\"6\" stroke=\"#1f3b73\" stroke-width=\"1.6\"/>"},
            {"envelope", "<line x1=\"0\" y1=\"6\" x2=\"18\" y2=\"6\" stroke=\"#555555\" stroke-dasharray=\"6 3\"/>"},
            {"excised excursion",
             "<rect x=\"0\" y=\"0\" width=\"18\" height=\"12\" fill=\"#d62728\" fill-opacity=\"0.35\"/>"},
            {"kept excursion", "<rect x=\"0\" y=\"0\" width=\"18\" height=\"12\" fill=\"#1f77b4\" fill-opacity=\"0.18\"/>"},
            {"output", "<line x1=\"0\" y1=\"6\" x2=\"18\" y2=\"6\" stroke=\"#2a8c4a\" stroke-width=\"1.6\"/>"},
        };
        s << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
        int k = 0;
        for (const auto& it : items) {
            s << "<g transform=\"translate(760," << 50 + 18 * k << ")\">" << it.swatch << "<text x=\"24\" y=\"11\">"
              << it.label << "</text></g>\n";
            ++k;
        }
        s << "</g>\n";
    }

    const Path& src_;
    const TransformOutput& out_;
    std::string title_;
    double lo_ = 0.0;
    double hi_ = 1.0;
    double t_end_ = 1.0;
};

inline std::string render_svg(const Path& source, const TransformOutput& out, const std::string& title = {})
{
    return SvgFigure(source, out, title).render();
}

} // namespace excision
