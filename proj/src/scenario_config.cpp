#include "gridcap/errors.hpp"
#include "gridcap/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gridcap::scenario {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

class Reader {
public:
    Reader(const json& node, std::string where) : node_(node), where_(std::move(where))
    {
        if (!node_.is_object()) fail("expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const
    {
        std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& [key, value] : node_.items()) {
            if (!known.count(key)) fail("unknown key '" + key + "'");
        }
    }

    bool has(const char* key) const { return node_.contains(key) && !node_.at(key).is_null(); }

    double number(const char* key, double fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_number()) fail("'" + std::string(key) + "' must be a number");
        return v.get<double>();
    }

    std::optional<double> optional_number(const char* key) const
    {
        if (!has(key)) return std::nullopt;
        return number(key, 0.0);
    }

    bool boolean(const char* key, bool fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_boolean()) fail("'" + std::string(key) + "' must be true or false");
        return v.get<bool>();
    }

    std::string text(const char* key, const std::string& fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_string()) fail("'" + std::string(key) + "' must be a string");
        return v.get<std::string>();
    }

    const json& at(const char* key) const { return node_.at(key); }
    std::string where(const std::string& key) const { return where_ + "." + key; }

    [[noreturn]] void fail(const std::string& message) const { throw ValidationError(where_ + ": " + message); }

private:
    const json& node_;
    std::string where_;
};

EmissionCap parse_cap(const json& node, const std::string& where)
{
    Reader r(node, where);
    r.allow({"mode", "fraction", "base_tonnes", "tonnes"});
    EmissionCap cap;
    const auto mode = r.text("mode", "none");
    if (mode == "none") {
        cap.mode = EmissionCap::Mode::none;
    } else if (mode == "fraction_of_base") {
        cap.mode = EmissionCap::Mode::fraction_of_base;
        if (!r.has("fraction")) r.fail("fraction_of_base needs 'fraction'");
        cap.fraction = r.number("fraction", 0.0);
        cap.base_tonnes = r.optional_number("base_tonnes");
    } else if (mode == "absolute") {
        cap.mode = EmissionCap::Mode::absolute;
        if (!r.has("tonnes")) r.fail("absolute cap needs 'tonnes'");
        cap.tonnes = r.number("tonnes", 0.0);
    } else {
        r.fail("unknown cap mode '" + mode + "'");
    }
    return cap;
}

ReserveConfig parse_reserve(const json& node, const std::string& where)
{
    Reader r(node, where);
    r.allow({"enabled", "margin", "zonal", "credits"});
    ReserveConfig out;
    out.enabled = r.boolean("enabled", out.enabled);
    out.margin = r.number("margin", out.margin);
    out.zonal = r.boolean("zonal", out.zonal);
    if (r.has("credits")) {
        Reader credits(r.at("credits"), r.where("credits"));
        for (const auto& [key, value] : r.at("credits").items()) {
            if (!data::parse_kind(key)) credits.fail("unknown kind '" + key + "'");
            out.credits[key] = credits.number(key.c_str(), 0.0);
        }
    }
    return out;
}

CostOverride parse_override(const json& node, const std::string& where)
{
    Reader r(node, where);
    r.allow({"technology", "capital", "capital_energy", "fixed_om", "fixed_om_energy", "variable_om",
             "capital_multiplier", "fixed_om_multiplier", "efficiency"});
    CostOverride o;
    o.technology = r.text("technology", "");
    if (o.technology.empty()) r.fail("cost override needs 'technology'");
    o.capital = r.optional_number("capital");
    o.capital_energy = r.optional_number("capital_energy");
    o.fixed_om = r.optional_number("fixed_om");
    o.fixed_om_energy = r.optional_number("fixed_om_energy");
    o.variable_om = r.optional_number("variable_om");
    o.capital_multiplier = r.number("capital_multiplier", 1.0);
    o.fixed_om_multiplier = r.number("fixed_om_multiplier", 1.0);
    o.efficiency = r.optional_number("efficiency");
    return o;
}

std::string_view to_string(EmissionCap::Mode mode)
{
    switch (mode) {
    case EmissionCap::Mode::none: return "none";
    case EmissionCap::Mode::fraction_of_base: return "fraction_of_base";
    case EmissionCap::Mode::absolute: return "absolute";
    }
    return "none";
}

void check_unit_interval(double v, const std::string& what, bool open_low = false)
{
    const bool ok = std::isfinite(v) && (open_low ? v > 0.0 : v >= 0.0) && v <= 1.0;
    if (!ok) throw ValidationError(what + " must be in " + (open_low ? "(0, 1]" : "[0, 1]"));
}

void check_non_negative(double v, const std::string& what)
{
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(what + " must be finite and >= 0");
}

bool flag_value(const ScenarioConfig& c, const char* key, bool fallback)
{
    const auto it = c.tech_flags.find(key);
    return it == c.tech_flags.end() ? fallback : it->second;
}

} // namespace

ScenarioConfig parse_scenario(std::string_view json_text, const std::string& origin)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    Reader r(root, origin);
    r.allow({"name", "description", "emission_cap", "cap_scope", "tech_flags", "capacity_caps", "nuclear_min_gen",
             "ccs_capture_rate", "h2_demand", "coupling", "blue_h2", "network_expansion", "reserve", "cost_overrides",
             "layout"});
    ScenarioConfig c;
    c.name = r.text("name", "");
    if (c.name.empty()) r.fail("scenario needs a 'name'");
    c.description = r.text("description", "");
    if (r.has("emission_cap")) c.emission_cap = parse_cap(r.at("emission_cap"), r.where("emission_cap"));

    const auto scope = r.text("cap_scope", "system");
    if (scope != "system" && scope != "zonal") r.fail("cap_scope must be 'system' or 'zonal'");
    c.cap_zonal = scope == "zonal";

    if (r.has("tech_flags")) {
        const auto& flags = r.at("tech_flags");
        Reader fr(flags, r.where("tech_flags"));
        for (const auto& [key, value] : flags.items()) c.tech_flags[key] = fr.boolean(key.c_str(), true);
    }
    if (r.has("capacity_caps")) {
        const auto& caps = r.at("capacity_caps");
        if (!caps.is_array()) r.fail("'capacity_caps' must be a list");
        for (std::size_t i = 0; i < caps.size(); ++i) {
            Reader cr(caps[i], r.where("capacity_caps[" + std::to_string(i) + "]"));
            cr.allow({"name", "members", "mw"});
            CapacityCap cap;
            cap.name = cr.text("name", "");
            if (cap.name.empty()) cr.fail("capacity cap needs a 'name'");
            if (!cr.has("members") || !cr.at("members").is_array()) cr.fail("'members' must be a list");
            for (const auto& m : cr.at("members")) {
                if (!m.is_string()) cr.fail("'members' entries must be strings");
                cap.members.push_back(m.get<std::string>());
            }
            if (!cr.has("mw")) cr.fail("capacity cap needs 'mw'");
            cap.mw = cr.number("mw", 0.0);
            c.capacity_caps.push_back(std::move(cap));
        }
    }
    c.nuclear_min_gen = r.optional_number("nuclear_min_gen");
    c.ccs_capture_rate = r.optional_number("ccs_capture_rate");
    if (r.has("h2_demand")) {
        Reader hr(r.at("h2_demand"), r.where("h2_demand"));
        hr.allow({"annual_twh", "mode"});
        c.h2_demand.annual_twh = hr.number("annual_twh", 0.0);
        const auto mode = hr.text("mode", "shaped");
        if (mode == "shaped") {
            c.h2_demand.mode = hydrogen_chain::DemandMode::shaped;
        } else if (mode == "flat") {
            c.h2_demand.mode = hydrogen_chain::DemandMode::flat;
        } else {
            hr.fail("mode must be 'shaped' or 'flat'");
        }
    }
    const auto coupling = r.text("coupling", "coupled");
    if (coupling != "coupled" && coupling != "decoupled") r.fail("coupling must be 'coupled' or 'decoupled'");
    c.decoupled = coupling == "decoupled";
    c.blue_h2 = r.boolean("blue_h2", false);
    if (r.has("network_expansion")) {
        const auto& net = r.at("network_expansion");
        Reader nr(net, r.where("network_expansion"));
        for (const auto& [key, value] : net.items()) {
            const auto commodity = data::parse_commodity(key);
            if (!commodity) nr.fail("unknown commodity '" + key + "'");
            c.network_expansion[*commodity] = nr.boolean(key.c_str(), true);
        }
    }
    if (r.has("reserve")) c.reserve = parse_reserve(r.at("reserve"), r.where("reserve"));
    if (r.has("cost_overrides")) {
        const auto& list = r.at("cost_overrides");
        if (!list.is_array()) r.fail("'cost_overrides' must be a list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            c.cost_overrides.push_back(parse_override(list[i], r.where("cost_overrides[" + std::to_string(i) + "]")));
        }
    }
    const auto layout = r.text("layout", "representative");
    if (layout == "representative") {
        c.layout = Layout::representative;
    } else if (layout == "full_year") {
        c.layout = Layout::full_year;
    } else {
        r.fail("layout must be 'representative' or 'full_year'");
    }
    validate(c);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string() + ": cannot open scenario file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::string to_json(const ScenarioConfig& c)
{
    ordered_json j;
    j["name"] = c.name;
    if (!c.description.empty()) j["description"] = c.description;
    ordered_json cap;
    cap["mode"] = to_string(c.emission_cap.mode);
    if (c.emission_cap.mode == EmissionCap::Mode::fraction_of_base) {
        cap["fraction"] = c.emission_cap.fraction;
        if (c.emission_cap.base_tonnes) cap["base_tonnes"] = *c.emission_cap.base_tonnes;
    } else if (c.emission_cap.mode == EmissionCap::Mode::absolute) {
        cap["tonnes"] = c.emission_cap.tonnes;
    }
    j["emission_cap"] = cap;
    j["cap_scope"] = c.cap_zonal ? "zonal" : "system";
    ordered_json flags = ordered_json::object();
    for (const auto& [k, v] : c.tech_flags) flags[k] = v;
    j["tech_flags"] = flags;
    ordered_json caps = ordered_json::array();
    for (const auto& cc : c.capacity_caps) caps.push_back({{"name", cc.name}, {"members", cc.members}, {"mw", cc.mw}});
    j["capacity_caps"] = caps;
    if (c.nuclear_min_gen) j["nuclear_min_gen"] = *c.nuclear_min_gen;
    if (c.ccs_capture_rate) j["ccs_capture_rate"] = *c.ccs_capture_rate;
    j["h2_demand"] = {{"annual_twh", c.h2_demand.annual_twh},
                      {"mode", c.h2_demand.mode == hydrogen_chain::DemandMode::flat ? "flat" : "shaped"}};
    j["coupling"] = c.decoupled ? "decoupled" : "coupled";
    j["blue_h2"] = c.blue_h2;
    ordered_json net = ordered_json::object();
    for (const auto& [k, v] : c.network_expansion) net[std::string(data::to_string(k))] = v;
    j["network_expansion"] = net;
    ordered_json credits = ordered_json::object();
    for (const auto& [k, v] : c.reserve.credits) credits[k] = v;
    j["reserve"] = {{"enabled", c.reserve.enabled}, {"margin", c.reserve.margin}, {"zonal", c.reserve.zonal},
                    {"credits", credits}};
    ordered_json overrides = ordered_json::array();
    for (const auto& o : c.cost_overrides) {
        ordered_json e;
        e["technology"] = o.technology;
        if (o.capital) e["capital"] = *o.capital;
        if (o.capital_energy) e["capital_energy"] = *o.capital_energy;
        if (o.fixed_om) e["fixed_om"] = *o.fixed_om;
        if (o.fixed_om_energy) e["fixed_om_energy"] = *o.fixed_om_energy;
        if (o.variable_om) e["variable_om"] = *o.variable_om;
        if (o.capital_multiplier != 1.0) e["capital_multiplier"] = o.capital_multiplier;
        if (o.fixed_om_multiplier != 1.0) e["fixed_om_multiplier"] = o.fixed_om_multiplier;
        if (o.efficiency) e["efficiency"] = *o.efficiency;
        overrides.push_back(e);
    }
    j["cost_overrides"] = overrides;
    j["layout"] = c.layout == Layout::full_year ? "full_year" : "representative";
    return j.dump(2) + "\n";
}

void validate(const ScenarioConfig& c)
{
    const std::string at = "scenario '" + c.name + "': ";
    if (c.name.empty()) throw ValidationError("scenario needs a name");
    const auto& cap = c.emission_cap;
    if (cap.mode == EmissionCap::Mode::fraction_of_base) {
        check_non_negative(cap.fraction, at + "emission cap fraction");
        if (cap.base_tonnes) check_non_negative(*cap.base_tonnes, at + "base emissions");
    } else if (cap.mode == EmissionCap::Mode::absolute) {
        check_non_negative(cap.tonnes, at + "emission cap tonnes");
    }
    if (c.cap_zonal && cap.mode == EmissionCap::Mode::none) {
        throw ValidationError(at + "cap_scope 'zonal' without an emission cap");
    }
    for (const auto& cc : c.capacity_caps) {
        if (cc.members.empty()) throw ValidationError(at + "capacity cap '" + cc.name + "' has no members");
        check_non_negative(cc.mw, at + "capacity cap '" + cc.name + "'");
    }
    if (c.nuclear_min_gen) check_unit_interval(*c.nuclear_min_gen, at + "nuclear_min_gen");
    if (c.ccs_capture_rate) check_unit_interval(*c.ccs_capture_rate, at + "ccs_capture_rate");
    check_non_negative(c.h2_demand.annual_twh, at + "h2_demand.annual_twh");
    check_non_negative(c.reserve.margin, at + "reserve margin");
    for (const auto& [kind, credit] : c.reserve.credits) check_unit_interval(credit, at + "reserve credit of " + kind);
    for (const auto& o : c.cost_overrides) {
        const std::string what = at + "cost override '" + o.technology + "' ";
        for (const auto& v : {o.capital, o.capital_energy, o.fixed_om, o.fixed_om_energy, o.variable_om}) {
            if (v) check_non_negative(*v, what + "value");
        }
        check_non_negative(o.capital_multiplier, what + "capital_multiplier");
        check_non_negative(o.fixed_om_multiplier, what + "fixed_om_multiplier");
        if (o.efficiency) check_unit_interval(*o.efficiency, what + "efficiency", true);
    }

    const bool ccs_allowed = flag_value(c, "ccs", true) && flag_value(c, "ccs_retrofit", true);
    if (c.blue_h2 && !ccs_allowed) throw ValidationError(at + "blue_h2 requires CCS, but CCS is forbidden");
    if (c.blue_h2 && (!flag_value(c, "fossil_h2", true) || !flag_value(c, "smr", true))) {
        throw ValidationError(at + "blue_h2 requires fossil hydrogen, but it is forbidden");
    }
    const bool green_possible = flag_value(c, "hydrogen", true) && flag_value(c, "p2g", true);
    if (c.h2_demand.annual_twh > 0.0 && !green_possible && !c.blue_h2) {
        throw ValidationError(at + "hydrogen demand is set but no hydrogen production is allowed");
    }
    if (c.decoupled && c.h2_demand.annual_twh <= 0.0) {
        throw ValidationError(at + "decoupled coupling needs a hydrogen demand");
    }
}

} // namespace gridcap::scenario
