#include "qsurf/reference_data.hpp"

#include "qsurf/errors.hpp"

namespace qsurf::refdata {

const char* element_name(Element e) {
    switch (e) {
        case Element::Pads: return "pads";
        case Element::Leads: return "leads";
        case Element::Squid: return "squid";
    }
    return "?";
}

Element element_from_name(const std::string& name) {
    if (name == "pads") return Element::Pads;
    if (name == "leads") return Element::Leads;
    if (name == "squid" || name == "SQUID") return Element::Squid;
    throw ParseError("unknown element '" + name + "'");
}

const char* process_name(Process p) {
    return p == Process::LiftOff ? "lift-off" : "etch";
}

Process process_from_name(const std::string& name) {
    if (name == "lift-off" || name == "liftoff") return Process::LiftOff;
    if (name == "etch" || name == "wet-etch") return Process::Etch;
    throw ParseError("unknown process '" + name + "' (expected lift-off or etch)");
}

int ReferenceDataset::design_index(const std::string& label) const {
    for (int i = 0; i < 3; ++i) {
        if (label == design_labels[i]) return i;
    }
    throw ValidationError("unknown design label '" + label + "'");
}

double ReferenceDataset::participation_of(const std::string& design, Element e) const {
    return participation[design_index(design)][static_cast<int>(e)];
}

const ReferenceDataset& reference_dataset() {
    static const ReferenceDataset ds = [] {
        ReferenceDataset d;
        constexpr double u = 1e-4;

        // element totals [design][pads, leads, squid]
        d.participation = {{
            {{1.852 * u, 3.312 * u, 0.613 * u}},   // long
            {{1.938 * u, 1.247 * u, 0.694 * u}},   // regular
            {{2.086 * u, 0.652 * u, 0.724 * u}},   // wide
        }};

        // per-interface breakdown [design][element][MA, MS, SA]
        d.interface_participation = {{
            {{ {{0.0362 * u, 0.5435 * u, 1.2723 * u}},
               {{0.1905 * u, 1.7733 * u, 1.3484 * u}},
               {{0.0353 * u, 0.3282 * u, 0.2496 * u}} }},
            {{ {{0.0487 * u, 0.7033 * u, 1.1862 * u}},
               {{0.0718 * u, 0.6679 * u, 0.5078 * u}},
               {{0.0399 * u, 0.3714 * u, 0.2824 * u}} }},
            {{ {{0.0170 * u, 0.4105 * u, 1.6588 * u}},
               {{0.0359 * u, 0.3605 * u, 0.2555 * u}},
               {{0.0398 * u, 0.4003 * u, 0.2837 * u}} }},
        }};

        // extracted loss tangents [process][pads, leads, squid]
        d.loss_tangent = {{
            {{10.4 * u, 9.2 * u, 3.7 * u}},   // lift-off
            {{11.3 * u, 7.9 * u, 4.0 * u}},   // wet etch
        }};
        d.loss_tangent_ci = {{
            {{3.9 * u, 4.5 * u, 2.1 * u}},
            {{3.4 * u, 3.8 * u, 1.7 * u}},
        }};

        d.measured = {{
            {"Q1", "long", Process::LiftOff, 1.78e6},
            {"Q3", "regular", Process::LiftOff, 3.17e6},
            {"Q5", "wide", Process::LiftOff, 2.99e6},
            {"Q6", "long", Process::Etch, 1.98e6},
            {"Q4", "regular", Process::Etch, 2.76e6},
            {"Q2", "wide", Process::Etch, 3.30e6},
        }};

        d.anharmonicity_MHz = {179.0, 215.0, 182.0};
        d.sweet_spot_GHz_long = {4.825, 4.739};
        d.sweet_spot_GHz_regular = {4.999, 5.164};
        d.sweet_spot_GHz_wide = {4.824, 5.152};
        return d;
    }();
    return ds;
}

}  // namespace qsurf::refdata
