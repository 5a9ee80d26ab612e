#include "fogsim/app.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <json.hpp>

namespace fogsim {

const AppModule* Application::find_module(const std::string& n) const {
    for (const auto& m : modules)
        if (m.name == n) return &m;
    return nullptr;
}

int Application::module_index(const std::string& n) const {
    for (size_t i = 0; i < modules.size(); ++i)
        if (modules[i].name == n) return static_cast<int>(i);
    return -1;
}

std::vector<const AppEdge*> Application::edges_from(const std::string& module) const {
    std::vector<const AppEdge*> out;
    for (const auto& e : edges)
        if (e.source == module) out.push_back(&e);
    return out;
}

double Application::selectivity_ratio(const std::string& module,
                                      const std::string& input_type,
                                      const std::string& output_type) const {
    for (const auto& s : selectivities)
        if (s.module == module && s.input_type == input_type &&
            s.output_type == output_type)
            return s.ratio;
    return 1.0;
}

void Application::validate() const {
    std::set<std::string> names;
    for (const auto& m : modules) {
        if (m.ram_gb <= 0.0)
            throw ValidationError("module " + m.name + ": ram must be > 0");
        if (!names.insert(m.name).second)
            throw ValidationError("duplicate module name: " + m.name);
    }
    for (const auto& e : edges) {
        if (e.source == e.dest)
            throw ValidationError("self-edge " + e.source + " -> " + e.dest);
        if (!names.count(e.source) || !names.count(e.dest))
            throw ValidationError("edge references unknown module: " + e.source +
                                  " -> " + e.dest);
        if (e.cpu_length_mi < 0.0)
            throw ValidationError("edge " + e.tuple_type + ": cpu_length < 0");
        if (e.nw_length_mb <= 0.0)
            throw ValidationError("edge " + e.tuple_type + ": nw_length must be > 0");
    }
    for (const auto& s : selectivities)
        if (s.ratio <= 0.0)
            throw ValidationError("selectivity for " + s.module + ": ratio must be > 0");

    // Cycle check over UP edges, with the cycle reported when found.
    std::map<std::string, std::vector<std::string>> up;
    for (const auto& e : edges)
        if (e.direction == EdgeDirection::Up) up[e.source].push_back(e.dest);
    std::map<std::string, int> state;  // 0 unvisited, 1 in stack, 2 done
    std::vector<std::string> stack;
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        state[v] = 1;
        stack.push_back(v);
        for (const auto& w : up[v]) {
            if (state[w] == 1) {
                auto it = std::find(stack.begin(), stack.end(), w);
                std::string cycle;
                for (; it != stack.end(); ++it) cycle += *it + " -> ";
                throw ValidationError("UP-edge cycle: " + cycle + w);
            }
            if (state[w] == 0) visit(w);
        }
        stack.pop_back();
        state[v] = 2;
    };
    for (const auto& m : modules)
        if (state[m.name] == 0) visit(m.name);

    for (const auto& loop : loops) {
        for (size_t i = 0; i + 1 < loop.modules.size(); ++i) {
            bool connected = false;
            for (const auto& e : edges)
                if (e.source == loop.modules[i] && e.dest == loop.modules[i + 1])
                    connected = true;
            if (!connected)
                throw ValidationError("loop breaks between " + loop.modules[i] +
                                      " and " + loop.modules[i + 1]);
        }
    }
}

std::optional<std::string> Application::next_eligible_microservice(
    const std::set<std::string>& placed) const {
    for (const auto& m : modules) {
        if (placed.count(m.name)) continue;
        bool ready = true;
        for (const auto& e : edges) {
            if (e.direction != EdgeDirection::Up) continue;
            if (e.dest == m.name && !placed.count(e.source)) ready = false;
        }
        if (ready) return m.name;
    }
    return std::nullopt;
}

Application parse_application(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    Application app;
    app.name = j.value("name", "app");
    for (const auto& mj : j.at("modules")) {
        AppModule m;
        m.name = mj.at("name").get<std::string>();
        m.ram_gb = mj.at("ram").get<double>();
        m.is_client = mj.value("client", false);
        m.state_mb = mj.value("state_mb", 0.0);
        m.exec_mi = mj.value("exec_mi", 0.0);
        m.pin_tier = mj.value("pin_tier", -1);
        if (mj.contains("consumes"))
            for (const auto& c : mj["consumes"]) m.consumes.push_back(c.get<std::string>());
        app.modules.push_back(std::move(m));
    }
    for (const auto& ej : j.at("edges")) {
        AppEdge e;
        e.source = ej.at("source").get<std::string>();
        e.dest = ej.at("dest").get<std::string>();
        e.cpu_length_mi = ej.at("cpu").get<double>();
        e.nw_length_mb = ej.at("nw").get<double>();
        e.tuple_type = ej.at("type").get<std::string>();
        e.direction = ej.value("direction", std::string("up")) == "down"
                          ? EdgeDirection::Down
                          : EdgeDirection::Up;
        e.periodic_ms = ej.value("periodic_ms", 0.0);
        app.edges.push_back(std::move(e));
    }
    if (j.contains("selectivities")) {
        for (const auto& sj : j["selectivities"]) {
            Selectivity s;
            s.module = sj.at("module").get<std::string>();
            s.input_type = sj.at("input").get<std::string>();
            s.output_type = sj.at("output").get<std::string>();
            s.ratio = sj.at("ratio").get<double>();
            app.selectivities.push_back(std::move(s));
        }
    }
    if (j.contains("loops")) {
        for (const auto& lj : j["loops"]) {
            AppLoop l;
            for (const auto& m : lj) l.modules.push_back(m.get<std::string>());
            app.loops.push_back(std::move(l));
        }
    }
    app.validate();
    return app;
}

} // namespace fogsim
