#include "roadpulse/netbuild/osm.hpp"

#include "roadpulse/common/error.hpp"
#include "roadpulse/common/util.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace roadpulse::netbuild {

namespace {

// --- minimal XML tag scanner -------------------------------------------------
// OSM extracts only need elements with attributes; text content is ignored.

struct XmlTag {
    std::string name;
    bool closing = false;
    bool self_closing = false;
    std::vector<std::pair<std::string, std::string>> attrs;

    const std::string* find(const char* key) const {
        for (const auto& [k, v] : attrs)
            if (k == key)
                return &v;
        return nullptr;
    }
};

std::string unescape(const std::string& s) {
    if (s.find('&') == std::string::npos)
        return s;
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        const std::size_t semi = s.find(';', i);
        if (semi == std::string::npos) {
            out += s[i++];
            continue;
        }
        const std::string ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (!ent.empty() && ent[0] == '#') {
            const long code = std::strtol(ent.c_str() + (ent[1] == 'x' ? 2 : 1), nullptr,
                                          ent[1] == 'x' ? 16 : 10);
            if (code > 0 && code < 128)
                out += static_cast<char>(code);
        }
        i = semi + 1;
    }
    return out;
}

class XmlScanner {
public:
    explicit XmlScanner(const std::string& text) : text_(text) {}

    bool next(XmlTag& tag) {
        while (true) {
            const std::size_t lt = text_.find('<', pos_);
            if (lt == std::string::npos)
                return false;
            pos_ = lt + 1;
            if (starts_with(lt + 1, "!--")) {
                const std::size_t end = text_.find("-->", lt);
                if (end == std::string::npos)
                    fail("parse", "unterminated XML comment");
                pos_ = end + 3;
                continue;
            }
            if (pos_ < text_.size() && (text_[pos_] == '?' || text_[pos_] == '!')) {
                const std::size_t end = text_.find('>', pos_);
                if (end == std::string::npos)
                    fail("parse", "unterminated XML declaration");
                pos_ = end + 1;
                continue;
            }
            return parse_tag(tag);
        }
    }

private:
    bool starts_with(std::size_t at, const char* s) const {
        return text_.compare(at, std::char_traits<char>::length(s), s) == 0;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool parse_tag(XmlTag& tag) {
        tag.attrs.clear();
        tag.closing = tag.self_closing = false;
        if (pos_ < text_.size() && text_[pos_] == '/') {
            tag.closing = true;
            ++pos_;
        }
        const std::size_t name_start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '>' && text_[pos_] != '/')
            ++pos_;
        tag.name = text_.substr(name_start, pos_ - name_start);
        if (tag.name.empty())
            fail("parse", "malformed XML tag");
        while (true) {
            skip_ws();
            if (pos_ >= text_.size())
                fail("parse", "unterminated XML tag <" + tag.name);
            if (text_[pos_] == '>') {
                ++pos_;
                return true;
            }
            if (text_[pos_] == '/') {
                ++pos_;
                if (pos_ >= text_.size() || text_[pos_] != '>')
                    fail("parse", "malformed tag end in <" + tag.name);
                ++pos_;
                tag.self_closing = true;
                return true;
            }
            // attribute
            const std::size_t key_start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '=' &&
                   !std::isspace(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string key = text_.substr(key_start, pos_ - key_start);
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != '=')
                fail("parse", "attribute '" + key + "' missing value in <" + tag.name);
            ++pos_;
            skip_ws();
            if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\''))
                fail("parse", "attribute '" + key + "' value not quoted in <" + tag.name);
            const char quote = text_[pos_++];
            const std::size_t val_start = pos_;
            const std::size_t val_end = text_.find(quote, val_start);
            if (val_end == std::string::npos)
                fail("parse", "unterminated attribute value in <" + tag.name);
            tag.attrs.emplace_back(std::move(key), unescape(text_.substr(val_start, val_end - val_start)));
            pos_ = val_end + 1;
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

// --- OSM interpretation ------------------------------------------------------

struct Coord {
    double lat, lon;
};

struct WayData {
    std::int64_t id = 0;
    std::vector<std::int64_t> refs;
    RoadClass road_class = RoadClass::Residential;
    int oneway = 0; // 0 both, +1 forward only, -1 reverse only
    double speed_kmh = 0; // 0 = use class default
    int lanes = 1;
};

bool classify_highway(const std::string& value, NetworkMode mode, RoadClass& out) {
    if (value == "motorway" || value == "motorway_link" || value == "trunk" || value == "trunk_link")
        out = RoadClass::Motorway;
    else if (value == "primary" || value == "primary_link")
        out = RoadClass::Primary;
    else if (value == "secondary" || value == "secondary_link")
        out = RoadClass::Secondary;
    else if (value == "tertiary" || value == "tertiary_link")
        out = RoadClass::Tertiary;
    else if (value == "residential" || value == "unclassified" || value == "living_street")
        out = RoadClass::Residential;
    else
        return false;
    // The highway network keeps only the major interurban classes.
    if (mode == NetworkMode::Highway && out != RoadClass::Motorway && out != RoadClass::Primary)
        return false;
    return true;
}

double parse_maxspeed_kmh(const std::string& v) {
    char* end = nullptr;
    double speed = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || speed <= 0)
        return 0;
    if (v.find("mph") != std::string::npos)
        speed *= 1.609344;
    return speed;
}

} // namespace

RoadNetwork parse_network_text(const std::string& osm_xml, const BBox& bbox, NetworkMode mode,
                               const ClassTable& defaults, ParseStats* stats) {
    if (bbox.degenerate())
        fail("config", "bounding box is degenerate");

    ParseStats local{};
    ParseStats& st = stats ? *stats : local;

    std::unordered_map<std::int64_t, Coord> coords;
    std::vector<WayData> ways;

    XmlScanner scanner(osm_xml);
    XmlTag tag;
    WayData current;
    bool in_way = false;
    std::string highway_value;
    while (scanner.next(tag)) {
        if (tag.closing) {
            if (tag.name == "way" && in_way) {
                ++st.ways_total;
                RoadClass rc;
                if (!highway_value.empty() && classify_highway(highway_value, mode, rc)) {
                    current.road_class = rc;
                    ways.push_back(current);
                }
                in_way = false;
            }
            continue;
        }
        if (tag.name == "node") {
            const std::string* id = tag.find("id");
            const std::string* lat = tag.find("lat");
            const std::string* lon = tag.find("lon");
            if (!id || !lat || !lon)
                fail("parse", "node element missing id/lat/lon");
            coords[std::strtoll(id->c_str(), nullptr, 10)] =
                Coord{std::strtod(lat->c_str(), nullptr), std::strtod(lon->c_str(), nullptr)};
        } else if (tag.name == "way") {
            const std::string* id = tag.find("id");
            if (!id)
                fail("parse", "way element missing id");
            current = WayData{};
            current.id = std::strtoll(id->c_str(), nullptr, 10);
            highway_value.clear();
            in_way = !tag.self_closing;
            if (tag.self_closing)
                ++st.ways_total;
        } else if (in_way && tag.name == "nd") {
            const std::string* ref = tag.find("ref");
            if (!ref)
                fail("parse", "nd element missing ref");
            current.refs.push_back(std::strtoll(ref->c_str(), nullptr, 10));
        } else if (in_way && tag.name == "tag") {
            const std::string* k = tag.find("k");
            const std::string* v = tag.find("v");
            if (!k || !v)
                fail("parse", "tag element missing k/v");
            if (*k == "highway") {
                highway_value = *v;
            } else if (*k == "oneway") {
                if (*v == "yes" || *v == "true" || *v == "1")
                    current.oneway = 1;
                else if (*v == "-1" || *v == "reverse")
                    current.oneway = -1;
            } else if (*k == "maxspeed") {
                current.speed_kmh = parse_maxspeed_kmh(*v);
            } else if (*k == "lanes") {
                const long lanes = std::strtol(v->c_str(), nullptr, 10);
                if (lanes >= 1)
                    current.lanes = static_cast<int>(lanes);
            }
        }
    }
    st.ways_drivable = static_cast<int>(ways.size());

    // Clip each way to in-bbox runs, then count node usage to find junctions.
    auto in_box = [&](std::int64_t ref) {
        auto it = coords.find(ref);
        return it != coords.end() && bbox.contains(it->second.lat, it->second.lon);
    };

    std::vector<std::vector<std::int64_t>> runs;        // per way, concatenated
    std::vector<std::pair<std::size_t, std::size_t>> run_way; // run -> (way idx, run ordinal)
    for (std::size_t wi = 0; wi < ways.size(); ++wi) {
        const auto& refs = ways[wi].refs;
        std::size_t run_ordinal = 0;
        std::size_t i = 0;
        while (i < refs.size()) {
            while (i < refs.size() && !in_box(refs[i]))
                ++i;
            std::size_t j = i;
            while (j < refs.size() && in_box(refs[j]))
                ++j;
            if (j - i >= 2) {
                runs.emplace_back(refs.begin() + static_cast<std::ptrdiff_t>(i),
                                  refs.begin() + static_cast<std::ptrdiff_t>(j));
                run_way.emplace_back(wi, run_ordinal++);
            }
            i = j;
        }
    }

    std::unordered_map<std::int64_t, int> usage;
    for (const auto& run : runs) {
        for (std::int64_t ref : run) {
            int& u = usage[ref];
            if (u < 2)
                ++u;
        }
    }

    // Split runs at junctions; each piece becomes one link per direction.
    struct RawLink {
        std::int64_t from, to;
        double length_m;
        std::size_t way_idx;
        int seg_ordinal;
        bool forward;
    };
    std::vector<RawLink> raw;
    std::unordered_map<std::size_t, int> seg_counter; // way idx -> next ordinal
    for (std::size_t ri = 0; ri < runs.size(); ++ri) {
        const auto& run = runs[ri];
        const std::size_t wi = run_way[ri].first;
        const WayData& way = ways[wi];
        std::size_t seg_start = 0;
        double seg_len = 0;
        for (std::size_t k = 1; k < run.size(); ++k) {
            const Coord& a = coords[run[k - 1]];
            const Coord& b = coords[run[k]];
            seg_len += haversine_m(a.lat, a.lon, b.lat, b.lon);
            const bool is_junction = usage[run[k]] >= 2;
            if (k + 1 == run.size() || is_junction) {
                const std::int64_t from = run[seg_start];
                const std::int64_t to = run[k];
                if (from != to && seg_len > 0) {
                    const int ordinal = seg_counter[wi]++;
                    if (way.oneway >= 0)
                        raw.push_back(RawLink{from, to, seg_len, wi, ordinal, true});
                    if (way.oneway <= 0)
                        raw.push_back(RawLink{to, from, seg_len, wi, ordinal, false});
                }
                seg_start = k;
                seg_len = 0;
            }
        }
    }

    if (raw.empty())
        fail("empty-network", "no drivable ways within the bounding box");

    // Largest weakly connected component over segment endpoints.
    std::unordered_map<std::int64_t, int> comp_index;
    std::vector<int> parent;
    auto find_root = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto comp_of = [&](std::int64_t ref) {
        auto it = comp_index.find(ref);
        if (it != comp_index.end())
            return it->second;
        const int idx = static_cast<int>(parent.size());
        parent.push_back(idx);
        comp_index.emplace(ref, idx);
        return idx;
    };
    for (const RawLink& rl : raw) {
        int a = find_root(comp_of(rl.from));
        int b = find_root(comp_of(rl.to));
        if (a != b)
            parent[static_cast<std::size_t>(b)] = a;
    }
    std::unordered_map<int, int> comp_size;
    for (const auto& [ref, idx] : comp_index)
        ++comp_size[find_root(idx)];
    int best_root = -1, best_size = -1;
    for (const auto& [root, size] : comp_size) {
        if (size > best_size || (size == best_size && root < best_root)) {
            best_root = root;
            best_size = size;
        }
    }
    st.components_dropped = static_cast<int>(comp_size.size()) - 1;
    st.nodes_dropped = static_cast<int>(comp_index.size()) - best_size;

    // Materialize nodes and links in derivation order (deterministic).
    std::vector<Node> nodes;
    std::vector<Link> links;
    std::unordered_set<std::int64_t> node_emitted;
    auto emit_node = [&](std::int64_t ref) {
        if (node_emitted.insert(ref).second) {
            const Coord& c = coords[ref];
            nodes.push_back(Node{std::to_string(ref), c.lat, c.lon});
        }
    };
    for (const RawLink& rl : raw) {
        if (find_root(comp_index[rl.from]) != best_root) {
            ++st.links_dropped;
            continue;
        }
        const WayData& way = ways[rl.way_idx];
        const ClassDefaults& cd = defaults.get(way.road_class);
        const double speed = way.speed_kmh > 0 ? way.speed_kmh : cd.speed_kmh;
        const double fft = rl.length_m / (speed / 3.6);
        const double capacity = cd.capacity_per_lane_vph * way.lanes;
        emit_node(rl.from);
        emit_node(rl.to);
        links.push_back(Link{std::to_string(way.id) + ":" + std::to_string(rl.seg_ordinal) +
                                 (rl.forward ? ":f" : ":r"),
                             std::to_string(rl.from), std::to_string(rl.to), rl.length_m, fft, capacity,
                             way.road_class});
    }
    st.links_built = static_cast<int>(links.size());

    return RoadNetwork(mode, std::move(nodes), std::move(links));
}

RoadNetwork parse_network(const std::string& osm_xml_path, const BBox& bbox, NetworkMode mode,
                          const ClassTable& defaults, ParseStats* stats) {
    std::ifstream in(osm_xml_path, std::ios::binary);
    if (!in)
        fail("io", "cannot open '" + osm_xml_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network_text(buf.str(), bbox, mode, defaults, stats);
}

} // namespace roadpulse::netbuild
