#include "mbs/model_io.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

namespace mbs {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

struct Canvas {
    double min_x = 0, max_x = 0, min_t = 0, max_t = 0;
    bool any = false;
    void take(const Point4& p) {
        double x = rat_to_double(p.x1);
        double t = rat_to_double(p.t);
        if (!any) {
            min_x = max_x = x;
            min_t = max_t = t;
            any = true;
        } else {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_t = std::min(min_t, t);
            max_t = std::max(max_t, t);
        }
    }
};

} // namespace

std::string render_svg(const MbsModel& m) {
    if (!m.two_dimensional())
        throw UnsupportedError("plot supports 2D-embedded models (x2 = x3 = 0)");

    std::vector<Point4> marks;
    std::vector<std::pair<Point4, std::string>> specials; // limit/accumulation points
    for (const auto& [key, pts] : m.splitting)
        for (const auto& p : pts)
            marks.push_back(p);
    for (const auto& [key, seqs] : m.limits)
        for (const auto& seq : seqs) {
            specials.emplace_back(seq.limit, "limit");
            for (long k = seq.first; k < seq.first + 3; ++k)
                marks.push_back(seq.element(k));
        }
    for (const auto& p : m.sites.sample)
        marks.push_back(p);
    if (m.sites.tail == TailKind::InvSeq)
        specials.emplace_back(m.sites.limit, "limit");

    Canvas canvas;
    for (const auto& p : marks)
        canvas.take(p);
    for (const auto& [p, tag] : specials)
        canvas.take(p);
    for (const auto& chain : m.chains) {
        for (const auto& [p, s] : chain.elems)
            canvas.take(p);
        if (chain.symbolic)
            for (long i = 0; i < std::max<long>(chain.count, 2); ++i)
                canvas.take(Point4(chain.base.t + Rat(i) * chain.step.t,
                                   chain.base.x1 + Rat(i) * chain.step.x1, 0, 0));
    }
    if (!canvas.any) {
        canvas.min_x = -1;
        canvas.max_x = 1;
        canvas.min_t = -1;
        canvas.max_t = 1;
    }
    double span_x = std::max(canvas.max_x - canvas.min_x, 1.0);
    double span_t = std::max(canvas.max_t - canvas.min_t, 1.0);
    double margin = 0.15 * std::max(span_x, span_t);
    double x0 = canvas.min_x - margin, x1 = canvas.max_x + margin;
    double t0 = canvas.min_t - margin, t1 = canvas.max_t + margin;
    double scale = 640.0 / std::max(x1 - x0, t1 - t0);
    double width = (x1 - x0) * scale, height = (t1 - t0) * scale;

    auto sx = [&](double x) { return (x - x0) * scale; };
    auto sy = [&](double t) { return height - (t - t0) * scale; }; // time runs upward

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes through the origin when visible
    if (x0 < 0 && x1 > 0)
        svg << "<line x1=\"" << fmt(sx(0)) << "\" y1=\"0\" x2=\"" << fmt(sx(0)) << "\" y2=\""
            << fmt(height) << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    if (t0 < 0 && t1 > 0)
        svg << "<line x1=\"0\" y1=\"" << fmt(sy(0)) << "\" x2=\"" << fmt(width) << "\" y2=\""
            << fmt(sy(0)) << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

    auto cone_rays = [&](const Point4& p, const char* color) {
        double px = rat_to_double(p.x1), pt = rat_to_double(p.t);
        // future light-cone boundary: slope 1 in both spatial directions
        double reach = std::max(x1 - px, std::max(px - x0, t1 - pt));
        svg << "<line x1=\"" << fmt(sx(px)) << "\" y1=\"" << fmt(sy(pt)) << "\" x2=\""
            << fmt(sx(px + reach)) << "\" y2=\"" << fmt(sy(pt + reach)) << "\" stroke=\"" << color
            << "\" stroke-width=\"0.6\"/>\n";
        svg << "<line x1=\"" << fmt(sx(px)) << "\" y1=\"" << fmt(sy(pt)) << "\" x2=\""
            << fmt(sx(px - reach)) << "\" y2=\"" << fmt(sy(pt + reach)) << "\" stroke=\"" << color
            << "\" stroke-width=\"0.6\"/>\n";
    };

    for (const auto& p : marks)
        cone_rays(p, "#d9b38c");
    for (const auto& p : marks)
        svg << "<circle cx=\"" << fmt(sx(rat_to_double(p.x1))) << "\" cy=\""
            << fmt(sy(rat_to_double(p.t))) << "\" r=\"3\" fill=\"#223355\"/>\n";
    for (const auto& [p, tag] : specials) {
        svg << "<circle cx=\"" << fmt(sx(rat_to_double(p.x1))) << "\" cy=\""
            << fmt(sy(rat_to_double(p.t)))
            << "\" r=\"5\" fill=\"none\" stroke=\"#aa2222\" stroke-width=\"1.2\"/>\n";
        svg << "<text x=\"" << fmt(sx(rat_to_double(p.x1)) + 7) << "\" y=\""
            << fmt(sy(rat_to_double(p.t)) - 7) << "\" font-size=\"11\" fill=\"#aa2222\">" << tag
            << " " << p.to_string() << "</text>\n";
    }
    for (const auto& chain : m.chains) {
        std::vector<Point4> pts;
        for (const auto& [p, s] : chain.elems)
            pts.push_back(p);
        if (chain.symbolic)
            for (long i = 0; i < std::max<long>(chain.count, 2); ++i)
                pts.push_back(Point4(chain.base.t + Rat(i) * chain.step.t,
                                     chain.base.x1 + Rat(i) * chain.step.x1, 0, 0));
        svg << "<polyline fill=\"none\" stroke=\"#2a7a2a\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i)
                svg << " ";
            svg << fmt(sx(rat_to_double(pts[i].x1))) << "," << fmt(sy(rat_to_double(pts[i].t)));
        }
        svg << "\"/>\n";
        if (!pts.empty())
            svg << "<text x=\"" << fmt(sx(rat_to_double(pts.back().x1)) + 6) << "\" y=\""
                << fmt(sy(rat_to_double(pts.back().t))) << "\" font-size=\"11\" "
                << "fill=\"#2a7a2a\">chain " << chain.name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace mbs
