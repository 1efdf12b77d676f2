#include "pinnfem/autodiff/field.hpp"

namespace pinnfem::ad {

ScalarField constant_field(double c)
{
    ScalarField s;
    s.value = [c](const Point&) { return c; };
    s.jet = [c](const Point&, const Layout& layout) { return Jet(layout, c); };
    return s;
}

double JetField::value(const Point& x) const
{
    return evaluate(x, Layout{JetKind::taylor, dim(), 0}).value();
}

std::vector<Jet> ClosedFormField::evaluate(std::span<const Point> points, const Layout& layout) const
{
    std::vector<Jet> out;
    out.reserve(points.size());
    for (const Point& p : points) out.push_back(f_.jet(p, layout));
    return out;
}

std::vector<Jet> OffsetField::evaluate(std::span<const Point> points, const Layout& layout) const
{
    std::vector<Jet> out = base_->evaluate(points, layout);
    for (Jet& j : out) j += c_;
    return out;
}

} // namespace pinnfem::ad
