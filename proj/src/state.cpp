#include "mkg/state.hpp"

namespace mkg
{

GaugeState operator+(GaugeState a, const GaugeState& b)
{
    a.A0 += b.A0;
    a.A0_t += b.A0_t;
    a.A += b.A;
    a.A_t += b.A_t;
    a.phi += b.phi;
    a.phi_t += b.phi_t;
    return a;
}

GaugeState operator-(GaugeState a, const GaugeState& b)
{
    a.A0 -= b.A0;
    a.A0_t -= b.A0_t;
    a.A -= b.A;
    a.A_t -= b.A_t;
    a.phi -= b.phi;
    a.phi_t -= b.phi_t;
    return a;
}

GaugeState scaled(GaugeState a, double c)
{
    a.A0 *= c;
    a.A0_t *= c;
    a.A *= c;
    a.A_t *= c;
    a.phi *= c;
    a.phi_t *= c;
    return a;
}

void add_scaled(GaugeState& a, double c, const StateDot& d)
{
    a.A0.add_scaled(c, d.A0);
    a.A0_t.add_scaled(c, d.A0_t);
    a.A.add_scaled(c, d.A);
    a.A_t.add_scaled(c, d.A_t);
    a.phi.add_scaled(c, d.phi);
    a.phi_t.add_scaled(c, d.phi_t);
}

GaugeState truncate_to_band(const GaugeState& s)
{
    GaugeState out;
    out.A0 = truncate_to_band(s.A0);
    out.A0_t = truncate_to_band(s.A0_t);
    out.A = truncate_to_band(s.A);
    out.A_t = truncate_to_band(s.A_t);
    out.phi = truncate_to_band(s.phi);
    out.phi_t = truncate_to_band(s.phi_t);
    out.time = s.time;
    return out;
}

} // namespace mkg
