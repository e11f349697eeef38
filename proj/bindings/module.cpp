#include "ragseed/agent.hpp"
#include "ragseed/cli.hpp"
#include "ragseed/corpus.hpp"
#include "ragseed/embedding.hpp"
#include "ragseed/errors.hpp"
#include "ragseed/eval.hpp"
#include "ragseed/metrics.hpp"
#include "ragseed/rtsp.hpp"
#include "ragseed/util.hpp"
#include "ragseed/vector_store.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace ragseed;

namespace {

EmbeddingProviderConfig offline_provider(std::size_t dimension) {
    EmbeddingProviderConfig provider;
    provider.kind = ProviderKind::DeterministicOffline;
    provider.dimension = dimension;
    return provider;
}

py::dict request_to_dict(const RtspRequest& request) {
    py::dict d;
    d["method"] = method_name(request.method);
    d["uri"] = request.uri;
    d["version"] = request.version;
    py::list headers;
    for (const auto& header : request.headers) {
        headers.append(py::make_tuple(header.name, header.value));
    }
    d["headers"] = headers;
    d["body"] = request.body ? py::object(py::bytes(*request.body)) : py::none();
    return d;
}

RtspRequest request_from_dict(const py::dict& d) {
    RtspRequest request;
    const std::string token = py::cast<std::string>(d["method"]);
    const auto method = method_from_token(token);
    if (!method) throw ArgumentError("unknown RTSP method '" + token + "'");
    request.method = *method;
    request.uri = py::cast<std::string>(d["uri"]);
    if (d.contains("version")) request.version = py::cast<std::string>(d["version"]);
    if (d.contains("headers")) {
        for (const auto& item : d["headers"]) {
            const auto pair = py::cast<std::pair<std::string, std::string>>(item);
            request.headers.push_back({pair.first, pair.second});
        }
    }
    if (d.contains("body") && !d["body"].is_none()) {
        request.body = py::cast<std::string>(d["body"]);
    }
    return request;
}

RougeVariant rouge_from_name(const std::string& name) {
    if (name == "lcs") return RougeVariant::lcs();
    if (name.size() > 1 && name[0] == 'n') {
        return RougeVariant::ngram(static_cast<std::size_t>(std::stoul(name.substr(1))));
    }
    throw ArgumentError("rouge variant must be 'n<order>' or 'lcs', got '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_ragseed, m) {
    m.doc() = "RFC-grounded RAG agent pipeline for RTSP fuzzing seeds";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "clean_document",
        [](const std::string& text) {
            RawDocument raw{"doc", text, ""};
            return clean(raw, CleaningRules::rfc_defaults()).text;
        },
        py::arg("text"),
        "Apply the RFC cleaning rules (page furniture, dropped sections, blank runs).");

    m.def(
        "chunk_document",
        [](const std::string& text, std::size_t chunk_size, std::size_t overlap) {
            CleanDocument doc;
            doc.id = "doc";
            doc.text = text;  // chunking without cleaning; callers clean explicitly
            py::list out;
            for (const auto& c : chunk(doc, chunk_size, overlap)) {
                py::dict d;
                d["index"] = c.index;
                d["text"] = c.text;
                d["token_count"] = c.token_count;
                d["char_span"] = py::make_tuple(c.char_span.start, c.char_span.end);
                out.append(d);
            }
            return out;
        },
        py::arg("text"), py::arg("chunk_size"), py::arg("overlap"),
        "Split text into overlapping chunks of `chunk_size` whitespace tokens.");

    m.def(
        "embed",
        [](const std::string& text, std::size_t dimension) {
            return embed_text(text, offline_provider(dimension)).values;
        },
        py::arg("text"), py::arg("dimension") = 1536,
        "Deterministic offline embedding (unit-normalized token-hash counts).");

    m.def(
        "cosine_similarity",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return cosine_similarity(EmbeddingVector{a}, EmbeddingVector{b});
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "retrieve_top_k",
        [](const std::vector<std::string>& texts, const std::string& query,
           std::size_t k, std::size_t dimension) {
            std::vector<Chunk> chunks;
            for (std::size_t i = 0; i < texts.size(); ++i) {
                Chunk c;
                c.doc_id = "mem";
                c.index = i;
                c.text = texts[i];
                c.token_count = whitespace_tokens(texts[i]).size();
                c.char_span = {0, texts[i].size()};
                chunks.push_back(std::move(c));
            }
            const auto provider = offline_provider(dimension);
            const auto store = build_index(chunks, provider);
            py::list out;
            for (const auto& hit : retrieve(store, query, k, provider)) {
                out.append(py::make_tuple(hit.chunk.index, hit.score));
            }
            return out;
        },
        py::arg("texts"), py::arg("query"), py::arg("k") = 5,
        py::arg("dimension") = 1536,
        "Exact top-k cosine retrieval over the given texts; returns (index, score).");

    m.def(
        "parse_request",
        [](const py::bytes& raw) { return request_to_dict(parse_request(std::string(raw))); },
        py::arg("raw"));

    m.def(
        "serialize_request",
        [](const py::dict& request) {
            return py::bytes(serialize_request(request_from_dict(request)));
        },
        py::arg("request"));

    m.def(
        "validate_sequence",
        [](const std::vector<py::bytes>& packets) {
            std::vector<RtspRequest> requests;
            for (const auto& packet : packets) {
                requests.push_back(parse_request(std::string(packet)));
            }
            const auto report = validate_sequence(requests, default_transition_table());
            py::dict d;
            d["valid"] = report.valid;
            d["failing_index"] = report.failing_index
                                     ? py::object(py::int_(*report.failing_index))
                                     : py::object(py::none());
            d["reason"] = report.reason;
            py::list trace;
            for (const auto state : report.state_trace) trace.append(state_name(state));
            d["state_trace"] = trace;
            return d;
        },
        py::arg("packets"),
        "Check an RTSP request sequence against the default session FSM.");

    m.def(
        "bleu",
        [](const std::string& candidate, const std::string& reference, std::size_t max_n,
           bool smoothing) {
            return bleu(tokenize_packet(candidate, TokenSource::Candidate),
                        tokenize_packet(reference, TokenSource::Reference), max_n,
                        smoothing);
        },
        py::arg("candidate"), py::arg("reference"), py::arg("max_n") = 4,
        py::arg("smoothing") = true);

    m.def(
        "rouge",
        [](const std::string& candidate, const std::string& reference,
           const std::string& variant) {
            return rouge(tokenize_packet(candidate, TokenSource::Candidate),
                         tokenize_packet(reference, TokenSource::Reference),
                         rouge_from_name(variant));
        },
        py::arg("candidate"), py::arg("reference"), py::arg("variant") = "n1");

    m.def(
        "wer",
        [](const std::string& candidate, const std::string& reference) {
            return wer(tokenize_packet(candidate, TokenSource::Candidate),
                       tokenize_packet(reference, TokenSource::Reference));
        },
        py::arg("candidate"), py::arg("reference"));

    m.def("format_percent", &format_percent, py::arg("fraction"),
          "Fraction to percent text with two half-up decimals (0.8175 -> '81.75%').");

    m.def(
        "run_command",
        [](const std::vector<std::string>& args) { return run_command(args); },
        py::arg("args"), "Invoke the ragseed command line; returns the exit status.");
}
