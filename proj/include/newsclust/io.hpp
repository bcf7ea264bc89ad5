#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newsclust/bundle.hpp"
#include "newsclust/core.hpp"
#include "newsclust/engine.hpp"
#include "newsclust/metrics.hpp"
#include "newsclust/representations.hpp"

namespace newsclust {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// ---------------------------------------------------------------------------
// Corpora
// ---------------------------------------------------------------------------
struct Corpus {
    std::vector<Document> documents;  // file order
    // Vocabulary over corpus-provided TF-IDF weights, when every record has them.
    std::optional<TfidfModels> provided_models;
};

struct MirandaOptions {
    bool english_only = true;
};

// JSON lines (or a single JSON array) of news records. See README for the
// accepted schema. Throws ParseError (with line number), MissingField,
// DuplicateDocument.
Corpus parse_miranda(std::string_view content, const std::string& source, const MirandaOptions& options = {});
Corpus load_miranda(const std::filesystem::path& path, const MirandaOptions& options = {});

enum class TdtSplit { Train, Test, All, Custom };

struct TdtEvent {
    std::string_view name;
    TdtSplit split;  // Train or Test
};

// The 25 annotated TDT Pilot events with their train/test assignment.
const std::vector<TdtEvent>& tdt_events();
// Case/punctuation-insensitive lookup including known spelling variants.
std::optional<TdtEvent> find_tdt_event(std::string_view name);

// JSON lines with id, date, event and body text. Titles are empty and
// TitleBody equals Body. For TdtSplit::Custom, custom_split names the file
// listing the events to keep, one per line. Throws UnknownEvent.
std::vector<Document> parse_tdt(std::string_view content, const std::string& source, TdtSplit split,
                                const std::vector<std::string>& custom_events = {});
std::vector<Document> load_tdt(const std::filesystem::path& path, TdtSplit split,
                               const std::optional<std::filesystem::path>& custom_split = std::nullopt);

// ---------------------------------------------------------------------------
// Embedding file: little-endian binary
//   "NCEB" | u32 version | u32 dim | u64 count |
//   count x ( u32 id_len | id bytes | dim x f32 )
// ---------------------------------------------------------------------------
inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;

std::string serialize_embeddings(const EmbeddingStore& store);
// Throws BadMagic, VersionMismatch, TruncatedFile, DimensionMismatch (when
// expected_dim is given and differs), DuplicateDocument.
EmbeddingStore deserialize_embeddings(std::string_view bytes, std::optional<std::size_t> expected_dim = std::nullopt);
void save_embeddings(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore load_embeddings(const std::filesystem::path& path, std::optional<std::size_t> expected_dim = std::nullopt);

// Debug text form: "id v0 v1 ..." per line (floats written round-trip exact).
std::string format_embeddings_text(const EmbeddingStore& store);
EmbeddingStore parse_embeddings_text(std::string_view text);

// ---------------------------------------------------------------------------
// Model bundle: little-endian binary
//   "NCMB" | u32 format_version | u32 embedding_dim | u32 feature mask |
//   13 x f64 weights | f64 mu | f64 sigma | 31 x f64 creation net | u32 crc32
// ---------------------------------------------------------------------------
std::string serialize_bundle(const ModelBundle& bundle);
// Throws VersionMismatch or CorruptFile.
ModelBundle deserialize_bundle(std::string_view bytes);
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);
std::string describe_bundle(const ModelBundle& bundle);

// TF-IDF models as JSON.
std::string serialize_tfidf(const TfidfModels& models);
TfidfModels deserialize_tfidf(std::string_view json, const std::string& source);

// ---------------------------------------------------------------------------
// Assignments and partitions
// ---------------------------------------------------------------------------
// "doc_id<TAB>cluster_id<TAB>created<TAB>c_score<TAB>creation_prob" per line.
std::string format_assignments(const std::vector<Assignment>& assignments);
std::vector<Assignment> parse_assignments(std::string_view text, const std::string& source);

Partition partition_from_assignments(const std::vector<Assignment>& assignments);
// Throws MissingGoldLabel.
Partition partition_from_gold(const std::vector<Document>& docs);
// "doc_id<TAB>label" per line.
Partition parse_gold_tsv(std::string_view text, const std::string& source);

}  // namespace newsclust
