#include "newsclust/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "newsclust/errors.hpp"

namespace newsclust {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

namespace {

// --- little-endian byte codec ----------------------------------------------

class ByteWriter {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void raw(std::string_view s) { buf_.append(s); }
    std::string& str() { return buf_; }

private:
    std::string buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    bool has(std::size_t n) const { return bytes_.size() - pos_ >= n; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string_view raw(std::size_t n) {
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::string_view bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

constexpr std::string_view kEmbeddingMagic = "NCEB";
constexpr std::string_view kBundleMagic = "NCMB";
constexpr std::size_t kBundleSize = 4 + 4 + 4 + 4 + 8 * kFeatureCount + 8 * 2 + 8 * CreationNet::kParamCount + 4;

// --- JSON record helpers ---------------------------------------------------

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

const json* field(const json& rec, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        auto it = rec.find(n);
        if (it != rec.end() && !it->is_null()) return &*it;
    }
    return nullptr;
}

std::string scalar_string(const json& v, const std::string& what) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    throw InvalidValue(what + " must be a string or integer");
}

std::vector<std::string> string_list(const json& v, const std::string& what) {
    if (!v.is_array()) throw InvalidValue(what + " must be an array of strings");
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& item : v) {
        if (!item.is_string()) throw InvalidValue(what + " must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

SectionAnnotations parse_annotations(const json& v, const std::string& what) {
    if (!v.is_object()) throw InvalidValue(what + " must be an object");
    SectionAnnotations a;
    if (auto* t = field(v, {"tokens"})) a.tokens = string_list(*t, what + ".tokens");
    if (auto* l = field(v, {"lemmas"})) a.lemmas = string_list(*l, what + ".lemmas");
    if (auto* e = field(v, {"entities"})) a.entities = string_list(*e, what + ".entities");
    return a;
}

TermWeights parse_term_weights(const json& v, const std::string& what) {
    TermWeights out;
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!it.value().is_number()) throw InvalidValue(what + " weights must be numbers");
            out.emplace_back(it.key(), it.value().get<double>());
        }
    } else if (v.is_array()) {
        for (const auto& pair : v) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_number())
                throw InvalidValue(what + " entries must be [term, weight]");
            out.emplace_back(pair[0].get<std::string>(), pair[1].get<double>());
        }
    } else {
        throw InvalidValue(what + " must be an object or an array of pairs");
    }
    std::sort(out.begin(), out.end());
    return out;
}

// features keys such as "TOKENS_title", "Lemmas_all", "entities_body".
std::array<TermWeights, kSparseSlots> parse_features(const json& v) {
    if (!v.is_object()) throw InvalidValue("features must be an object");
    std::array<TermWeights, kSparseSlots> out;
    for (auto it = v.begin(); it != v.end(); ++it) {
        const std::string key = lower(it.key());
        const auto us = key.find('_');
        if (us == std::string::npos) continue;
        const std::string unit = key.substr(0, us), section = key.substr(us + 1);
        std::optional<Unit> u;
        if (unit == "tokens") u = Unit::Token;
        else if (unit == "lemmas") u = Unit::Lemma;
        else if (unit == "entities") u = Unit::Entity;
        std::optional<Section> s;
        if (section == "title") s = Section::Title;
        else if (section == "body") s = Section::Body;
        else if (section == "all" || section == "title_body" || section == "titlebody") s = Section::TitleBody;
        if (!u || !s) continue;
        out[sparse_slot(*u, *s)] = parse_term_weights(it.value(), "features." + it.key());
    }
    return out;
}

void fill_sections(Document& doc, const json& rec, Section body_only_marker, bool has_title) {
    (void)body_only_marker;
    if (auto* ann = field(rec, {"annotations", "sections"})) {
        if (!ann->is_object()) throw InvalidValue("annotations must be an object");
        if (has_title) {
            if (auto* t = field(*ann, {"title"})) doc.section(Section::Title) = parse_annotations(*t, "annotations.title");
        }
        if (auto* b = field(*ann, {"body"})) doc.section(Section::Body) = parse_annotations(*b, "annotations.body");
        if (auto* tb = field(*ann, {"title_body", "titlebody", "all"}); tb && has_title) {
            doc.section(Section::TitleBody) = parse_annotations(*tb, "annotations.title_body");
        } else {
            doc.section(Section::TitleBody) =
                concat_annotations(doc.section(Section::Title), doc.section(Section::Body));
        }
        return;
    }
    if (has_title) doc.section(Section::Title) = annotate_raw_text(doc.title);
    doc.section(Section::Body) = annotate_raw_text(doc.body);
    doc.section(Section::TitleBody) = concat_annotations(doc.section(Section::Title), doc.section(Section::Body));
}

// Calls fn(record, line_number) for each record of a JSON-lines file or a
// top-level JSON array.
template <class Fn>
void for_each_record(std::string_view content, const std::string& source, Fn&& fn) {
    const auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && content[first] == '[') {
        json all;
        try {
            all = json::parse(content);
        } catch (const json::parse_error& e) {
            throw ParseError(source, 1, e.what());
        }
        std::size_t index = 0;
        for (const auto& rec : all) fn(rec, ++index);
        return;
    }
    std::size_t line_no = 0, start = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        const auto line = content.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, line_no, e.what());
        }
        fn(rec, line_no);
    }
}

std::string normalize_event(std::string_view name) {
    std::string out;
    for (char c : name)
        if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Corpus parse_miranda(std::string_view content, const std::string& source, const MirandaOptions& options) {
    Corpus corpus;
    std::unordered_set<std::string> ids;
    std::size_t with_features = 0;
    for_each_record(content, source, [&](const json& rec, std::size_t line) {
        if (!rec.is_object()) throw ParseError(source, line, "record is not a JSON object");
        try {
            if (options.english_only) {
                if (auto* lang = field(rec, {"lang", "language"})) {
                    const std::string l = lower(scalar_string(*lang, "lang"));
                    if (l != "eng" && l != "en") return;
                }
            }
            Document doc;
            const json* id = field(rec, {"id"});
            if (!id) throw MissingField(source + ":" + std::to_string(line) + ": id");
            doc.id = scalar_string(*id, "id");
            if (doc.id.empty()) throw InvalidValue("id is empty");
            const json* date = field(rec, {"date", "timestamp"});
            if (!date) throw MissingField(source + ":" + std::to_string(line) + ": date");
            if (!date->is_string()) throw InvalidValue("date must be a string");
            doc.timestamp = parse_timestamp(date->get<std::string>());
            if (auto* t = field(rec, {"title"})) doc.title = scalar_string(*t, "title");
            if (auto* b = field(rec, {"text", "body"})) doc.body = scalar_string(*b, "text");
            if (auto* c = field(rec, {"cluster", "cluster_id", "event_id", "event"}))
                doc.gold_cluster = scalar_string(*c, "cluster");
            if (auto* f = field(rec, {"features"})) {
                doc.provided_weights = parse_features(*f);
                ++with_features;
            }
            fill_sections(doc, rec, Section::Body, true);
            if (!ids.insert(doc.id).second)
                throw DuplicateDocument(source + ":" + std::to_string(line) + ": id '" + doc.id + "' repeats");
            corpus.documents.push_back(std::move(doc));
        } catch (const InvalidValue& e) {
            throw ParseError(source, line, e.what());
        }
    });
    if (with_features != 0 && with_features != corpus.documents.size())
        throw MissingField(source + ": some records carry tf-idf features and others do not");
    if (with_features != 0) corpus.provided_models = vocabulary_from_provided(corpus.documents);
    return corpus;
}

Corpus load_miranda(const std::filesystem::path& path, const MirandaOptions& options) {
    return parse_miranda(read_file(path), path.string(), options);
}

const std::vector<TdtEvent>& tdt_events() {
    static const std::vector<TdtEvent> events{
        {"Karrigan/Harding", TdtSplit::Train},        {"Shannon Faulkner", TdtSplit::Train},
        {"Quayle lung clot", TdtSplit::Train},        {"Haiti ousts observers", TdtSplit::Train},
        {"NYC Subway bombing", TdtSplit::Train},      {"Carlos the Jackal", TdtSplit::Train},
        {"USAir 427 crash", TdtSplit::Train},         {"Lost in Iraq", TdtSplit::Train},
        {"Death of Kim Jong Il", TdtSplit::Train},    {"Clinic Murders (Salvi)", TdtSplit::Train},
        {"Kobe Japan quake", TdtSplit::Train},        {"Serbs violate Bihac", TdtSplit::Train},
        {"OK-City bombing", TdtSplit::Train},         {"Pentium chip flaw", TdtSplit::Test},
        {"Cuban riot in Panama", TdtSplit::Test},     {"Justice-to-be Breyer", TdtSplit::Test},
        {"Humble, TX, flooding", TdtSplit::Test},     {"WTC Bombing trial", TdtSplit::Test},
        {"Cessna on White House", TdtSplit::Test},    {"Aldrich Ames", TdtSplit::Test},
        {"Comet into Jupiter", TdtSplit::Test},       {"Serbians down F-16", TdtSplit::Test},
        {"Carter in Bosnia", TdtSplit::Test},         {"Hall's copter in N. Korea", TdtSplit::Test},
        {"DNA in OJ trial", TdtSplit::Test},
    };
    return events;
}

std::optional<TdtEvent> find_tdt_event(std::string_view name) {
    // Spelling variants seen in corpus releases and published split tables.
    static const std::vector<std::pair<std::string_view, std::string_view>> aliases{
        {"Karrigan Harding", "Karrigan/Harding"},   {"Kerrigan/Harding", "Karrigan/Harding"},
        {"Shannon Faulker", "Shannon Faulkner"},    {"Clinic Murders", "Clinic Murders (Salvi)"},
        {"Death of Kim Il Sung", "Death of Kim Jong Il"}, {"Halls copter", "Hall's copter in N. Korea"},
        {"Hall's copter", "Hall's copter in N. Korea"},   {"Humble TX flooding", "Humble, TX, flooding"},
    };
    const std::string key = normalize_event(name);
    for (const auto& e : tdt_events())
        if (normalize_event(e.name) == key) return e;
    for (const auto& [alias, canonical] : aliases)
        if (normalize_event(alias) == key) return find_tdt_event(canonical);
    return std::nullopt;
}

std::vector<Document> parse_tdt(std::string_view content, const std::string& source, TdtSplit split,
                                const std::vector<std::string>& custom_events) {
    std::set<std::string> keep;
    if (split == TdtSplit::Custom) {
        for (const auto& name : custom_events) {
            auto e = find_tdt_event(name);
            if (!e) throw UnknownEvent("split file names unknown event '" + name + "'");
            keep.insert(std::string(e->name));
        }
    }
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    for_each_record(content, source, [&](const json& rec, std::size_t line) {
        if (!rec.is_object()) throw ParseError(source, line, "record is not a JSON object");
        try {
            Document doc;
            const json* id = field(rec, {"id", "docno"});
            if (!id) throw MissingField(source + ":" + std::to_string(line) + ": id");
            doc.id = scalar_string(*id, "id");
            if (doc.id.empty()) throw InvalidValue("id is empty");
            const json* date = field(rec, {"date", "timestamp"});
            if (!date) throw MissingField(source + ":" + std::to_string(line) + ": date");
            if (!date->is_string()) throw InvalidValue("date must be a string");
            doc.timestamp = parse_timestamp(date->get<std::string>());
            const json* event = field(rec, {"event", "cluster"});
            if (!event) throw MissingField(source + ":" + std::to_string(line) + ": event");
            const std::string event_name = scalar_string(*event, "event");
            const auto known = find_tdt_event(event_name);
            if (!known)
                throw UnknownEvent(source + ":" + std::to_string(line) + ": '" + event_name + "' is not a TDT Pilot event");
            const bool selected = split == TdtSplit::All || (split == TdtSplit::Custom && keep.contains(std::string(known->name))) ||
                                  (split != TdtSplit::Custom && known->split == split);
            if (!selected) return;
            doc.gold_cluster = std::string(known->name);
            if (auto* b = field(rec, {"text", "body"})) doc.body = scalar_string(*b, "text");
            fill_sections(doc, rec, Section::Body, false);
            if (!ids.insert(doc.id).second)
                throw DuplicateDocument(source + ":" + std::to_string(line) + ": id '" + doc.id + "' repeats");
            docs.push_back(std::move(doc));
        } catch (const InvalidValue& e) {
            throw ParseError(source, line, e.what());
        }
    });
    return docs;
}

std::vector<Document> load_tdt(const std::filesystem::path& path, TdtSplit split,
                               const std::optional<std::filesystem::path>& custom_split) {
    std::vector<std::string> events;
    if (split == TdtSplit::Custom) {
        if (!custom_split) throw InvalidValue("custom TDT split requires a split file");
        std::istringstream in(read_file(*custom_split));
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            events.push_back(line);
        }
    }
    return parse_tdt(read_file(path), path.string(), split, events);
}

// ---------------------------------------------------------------------------

std::string serialize_embeddings(const EmbeddingStore& store) {
    ByteWriter w;
    w.raw(kEmbeddingMagic);
    w.u32(kEmbeddingFormatVersion);
    w.u32(static_cast<std::uint32_t>(store.dim()));
    w.u64(store.size());
    for (const std::string& id : store.ids()) {
        w.u32(static_cast<std::uint32_t>(id.size()));
        w.raw(id);
        for (float v : store.at(id)) w.f32(v);
    }
    return std::move(w.str());
}

EmbeddingStore deserialize_embeddings(std::string_view bytes, std::optional<std::size_t> expected_dim) {
    if (bytes.size() < 4 || bytes.substr(0, 4) != kEmbeddingMagic) throw BadMagic("not an embedding file");
    ByteReader r(bytes);
    r.raw(4);
    if (!r.has(16)) throw TruncatedFile("embedding header is incomplete");
    const std::uint32_t version = r.u32();
    if (version != kEmbeddingFormatVersion)
        throw VersionMismatch("embedding file version " + std::to_string(version) + " is not supported");
    const std::uint32_t dim = r.u32();
    const std::uint64_t count = r.u64();
    if (expected_dim && *expected_dim != dim)
        throw DimensionMismatch("embedding file has dimension " + std::to_string(dim) + ", expected " +
                                std::to_string(*expected_dim));
    EmbeddingStore store(dim);
    for (std::uint64_t k = 0; k < count; ++k) {
        if (!r.has(4)) throw TruncatedFile("header declares " + std::to_string(count) + " records, found " + std::to_string(k));
        const std::uint32_t len = r.u32();
        if (!r.has(len + 4ull * dim)) throw TruncatedFile("record " + std::to_string(k) + " is cut short");
        std::string id(r.raw(len));
        std::vector<float> vec(dim);
        for (float& v : vec) v = r.f32();
        store.add(id, std::move(vec));
    }
    if (r.remaining() != 0)
        throw TruncatedFile("data continues past the " + std::to_string(count) + " records declared in the header");
    return store;
}

void save_embeddings(const EmbeddingStore& store, const std::filesystem::path& path) {
    write_file(path, serialize_embeddings(store));
}

EmbeddingStore load_embeddings(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
    return deserialize_embeddings(read_file(path), expected_dim);
}

std::string format_embeddings_text(const EmbeddingStore& store) {
    std::string out;
    char buf[32];
    for (const std::string& id : store.ids()) {
        out += id;
        for (float v : store.at(id)) {
            std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(v));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

EmbeddingStore parse_embeddings_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<EmbeddingStore> store;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string id;
        if (!(fields >> id)) continue;
        std::vector<float> vec;
        std::string tok;
        while (fields >> tok) {
            char* end = nullptr;
            const float v = std::strtof(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size()) throw ParseError("embeddings", line_no, "bad float '" + tok + "'");
            vec.push_back(v);
        }
        if (!store) store.emplace(vec.size());
        store->add(id, std::move(vec));
    }
    return store ? std::move(*store) : EmbeddingStore(0);
}

// ---------------------------------------------------------------------------

std::string serialize_bundle(const ModelBundle& bundle) {
    ByteWriter w;
    w.raw(kBundleMagic);
    w.u32(bundle.format_version);
    w.u32(bundle.embedding_dim);
    w.u32(static_cast<std::uint32_t>(bundle.features.to_ulong()));
    for (double v : bundle.weights.values()) w.f64(v);
    w.f64(bundle.sim_params.mu_days);
    w.f64(bundle.sim_params.sigma_days);
    for (double v : bundle.creation_net.flatten()) w.f64(v);
    const std::uint32_t crc = crc32_of(w.str());
    w.u32(crc);
    return std::move(w.str());
}

ModelBundle deserialize_bundle(std::string_view bytes) {
    if (bytes.size() < 8 || bytes.substr(0, 4) != kBundleMagic) throw CorruptFile("not a model bundle");
    ByteReader r(bytes);
    r.raw(4);
    const std::uint32_t version = r.u32();
    if (version != ModelBundle::kFormatVersion)
        throw VersionMismatch("bundle format version " + std::to_string(version) + ", this build reads " +
                              std::to_string(ModelBundle::kFormatVersion));
    if (bytes.size() != kBundleSize)
        throw CorruptFile("bundle is " + std::to_string(bytes.size()) + " bytes, expected " + std::to_string(kBundleSize));
    ByteReader tail(bytes.substr(kBundleSize - 4));
    if (tail.u32() != crc32_of(bytes.substr(0, kBundleSize - 4))) throw CorruptFile("bundle checksum mismatch");

    const std::uint32_t dim = r.u32();
    const std::uint32_t mask_bits = r.u32();
    if (mask_bits >> kFeatureCount) throw CorruptFile("feature mask has unknown bits");
    std::array<double, kFeatureCount> w{};
    for (double& v : w) v = r.f64();
    SimilarityParams p;
    p.mu_days = r.f64();
    p.sigma_days = r.f64();
    std::vector<double> net(CreationNet::kParamCount);
    for (double& v : net) v = r.f64();
    try {
        validate(p);
        ModelBundle b{WeightVector(w), CreationNet::unflatten(net), p, dim, FeatureMask(mask_bits), version};
        return b;
    } catch (const InvalidValue& e) {
        throw CorruptFile(e.what());
    }
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
    write_file(path, serialize_bundle(bundle));
}

ModelBundle load_bundle(const std::filesystem::path& path) { return deserialize_bundle(read_file(path)); }

std::string describe_bundle(const ModelBundle& bundle) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "format_version\t%u\nembedding_dim\t%u\nfeatures\t%s\nmu_days\t%.17g\nsigma_days\t%.17g\n",
                  bundle.format_version, bundle.embedding_dim, format_feature_set(bundle.features).c_str(),
                  bundle.sim_params.mu_days, bundle.sim_params.sigma_days);
    out += buf;
    const auto& names = canonical_feature_order();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        std::snprintf(buf, sizeof buf, "weight.%s\t%.17g\n", std::string(names[i]).c_str(), bundle.weights[i]);
        out += buf;
    }
    const auto params = bundle.creation_net.flatten();
    for (std::size_t i = 0; i < params.size(); ++i) {
        std::snprintf(buf, sizeof buf, "net.%zu\t%.17g\n", i, params[i]);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string serialize_tfidf(const TfidfModels& models) {
    json out = json::array();
    for (const TfidfModel& m : models) {
        json terms = json::array();
        for (std::size_t i = 0; i < m.vocabulary_size(); ++i)
            terms.push_back(json::array({m.term(static_cast<std::uint32_t>(i)), m.idf(static_cast<std::uint32_t>(i))}));
        out.push_back({{"unit", std::string(to_string(m.unit()))}, {"doc_count", m.doc_count()}, {"terms", terms}});
    }
    return out.dump() + "\n";
}

TfidfModels deserialize_tfidf(std::string_view text, const std::string& source) {
    TfidfModels models;
    try {
        const json all = json::parse(text);
        if (!all.is_array() || all.size() != 3) throw ParseError(source, 1, "expected an array of 3 models");
        std::array<bool, 3> seen{};
        for (const auto& m : all) {
            const auto unit = parse_unit(m.at("unit").get<std::string>());
            if (!unit) throw ParseError(source, 1, "unknown unit");
            std::vector<std::string> terms;
            std::vector<double> idf;
            for (const auto& t : m.at("terms")) {
                terms.push_back(t.at(0).get<std::string>());
                idf.push_back(t.at(1).get<double>());
            }
            const auto u = static_cast<std::size_t>(*unit);
            if (seen[u]) throw ParseError(source, 1, "duplicate unit");
            seen[u] = true;
            models[u] = TfidfModel(*unit, m.at("doc_count").get<std::size_t>(), std::move(terms), std::move(idf));
        }
    } catch (const json::exception& e) {
        throw ParseError(source, 1, e.what());
    } catch (const InvalidValue& e) {
        throw ParseError(source, 1, e.what());
    }
    return models;
}

// ---------------------------------------------------------------------------

std::string format_assignments(const std::vector<Assignment>& assignments) {
    std::string out;
    char buf[96];
    for (const auto& a : assignments) {
        out += a.doc_id;
        std::snprintf(buf, sizeof buf, "\t%lld\t%d\t%.17g\t%.17g\n", static_cast<long long>(a.cluster_id),
                      a.created ? 1 : 0, a.c_score, a.creation_prob);
        out += buf;
    }
    return out;
}

std::vector<Assignment> parse_assignments(std::string_view text, const std::string& source) {
    std::vector<Assignment> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        while (true) {
            const auto tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cols.size() != 5) throw ParseError(source, line_no, "expected 5 tab-separated fields");
        Assignment a;
        a.doc_id = cols[0];
        try {
            std::size_t used = 0;
            a.cluster_id = std::stoll(cols[1], &used);
            if (used != cols[1].size() || (cols[2] != "0" && cols[2] != "1")) throw std::invalid_argument("field");
            a.created = cols[2] == "1";
            a.c_score = std::stod(cols[3]);
            a.creation_prob = std::stod(cols[4]);
        } catch (const std::exception&) {
            throw ParseError(source, line_no, "malformed assignment");
        }
        out.push_back(std::move(a));
    }
    return out;
}

Partition partition_from_assignments(const std::vector<Assignment>& assignments) {
    Partition p;
    for (const auto& a : assignments)
        if (!p.emplace(a.doc_id, std::to_string(a.cluster_id)).second)
            throw DuplicateDocument("document '" + a.doc_id + "' assigned twice");
    return p;
}

Partition partition_from_gold(const std::vector<Document>& docs) {
    Partition p;
    for (const auto& d : docs) {
        if (!d.gold_cluster) throw MissingGoldLabel("document '" + d.id + "' has no gold cluster");
        p.emplace(d.id, *d.gold_cluster);
    }
    return p;
}

Partition parse_gold_tsv(std::string_view text, const std::string& source) {
    Partition p;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw ParseError(source, line_no, "expected doc_id<TAB>label");
        if (!p.emplace(line.substr(0, tab), line.substr(tab + 1)).second)
            throw ParseError(source, line_no, "duplicate document id");
    }
    return p;
}

}  // namespace newsclust
