#include "irdm/model_io.hpp"

#include <fstream>
#include <sstream>

#include "irdm/csv.hpp"
#include "irdm/errors.hpp"

namespace irdm {

namespace {

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    std::string next() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return line;
        }
        throw DataError("model file truncated at line " + std::to_string(line_no));
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw DataError("model file line " + std::to_string(line_no) + ": " + msg);
    }
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double to_double(LineReader& r, const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) r.fail("bad number '" + tok + "'");
        return v;
    } catch (const std::exception&) {
        r.fail("bad number '" + tok + "'");
    }
}

int to_int(LineReader& r, const std::string& tok) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) r.fail("bad integer '" + tok + "'");
        return v;
    } catch (const std::exception&) {
        r.fail("bad integer '" + tok + "'");
    }
}

// The remainder of `line` after its first `n` whitespace-separated tokens.
std::string rest_after(const std::string& line, int n) {
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i) {
        while (pos < line.size() && line[pos] == ' ') ++pos;
        while (pos < line.size() && line[pos] != ' ') ++pos;
    }
    while (pos < line.size() && line[pos] == ' ') ++pos;
    return line.substr(pos);
}

void write_node(std::ostream& out, const TreeNode& node) {
    if (node.is_leaf()) {
        out << "L majority " << node.majority_class << " support " << node.support << " counts";
        for (int c : node.class_counts) out << ' ' << c;
        out << '\n';
        return;
    }
    if (node.test.is_numeric()) {
        out << "N " << node.test.attribute << " num " << format_double(*node.test.threshold);
    } else {
        out << "N " << node.test.attribute << " cat " << node.test.branch_categories.size();
        for (int id : node.test.branch_categories) out << ' ' << id;
    }
    out << " counts";
    for (int c : node.class_counts) out << ' ' << c;
    out << '\n';
    for (const auto& child : node.children) write_node(out, *child);
}

std::unique_ptr<TreeNode> read_node(LineReader& r, std::size_t n_classes) {
    const std::string line = r.next();
    const auto toks = tokens_of(line);
    auto node = std::make_unique<TreeNode>();

    auto read_counts = [&](std::size_t at) {
        if (toks.size() != at + 1 + n_classes || toks[at] != "counts")
            r.fail("expected 'counts' with " + std::to_string(n_classes) + " entries");
        node->class_counts.reserve(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c)
            node->class_counts.push_back(to_int(r, toks[at + 1 + c]));
        node->support = 0;
        for (int c : node->class_counts) node->support += c;
    };

    if (toks.empty()) r.fail("empty node line");
    if (toks[0] == "L") {
        if (toks.size() < 5 || toks[1] != "majority" || toks[3] != "support")
            r.fail("bad leaf line");
        node->majority_class = to_int(r, toks[2]);
        const int support = to_int(r, toks[4]);
        read_counts(5);
        if (node->support != support) r.fail("leaf support disagrees with counts");
        node->leaf_accuracy =
            node->support > 0
                ? static_cast<double>(node->class_counts[node->majority_class]) / node->support
                : 0.0;
        return node;
    }
    if (toks[0] != "N" || toks.size() < 3) r.fail("expected node line");
    node->test.attribute = to_int(r, toks[1]);
    std::size_t n_children = 0;
    if (toks[2] == "num") {
        if (toks.size() < 4) r.fail("numeric node needs a threshold");
        node->test.threshold = to_double(r, toks[3]);
        n_children = 2;
        read_counts(4);
    } else if (toks[2] == "cat") {
        if (toks.size() < 4) r.fail("categorical node needs a branch count");
        n_children = static_cast<std::size_t>(to_int(r, toks[3]));
        if (n_children < 1) r.fail("categorical node needs branches");
        if (toks.size() < 4 + n_children) r.fail("categorical node is missing branch ids");
        for (std::size_t b = 0; b < n_children; ++b)
            node->test.branch_categories.push_back(to_int(r, toks[4 + b]));
        read_counts(4 + n_children);
    } else {
        r.fail("unknown test kind '" + toks[2] + "'");
    }
    int best = 0;
    for (std::size_t c = 1; c < node->class_counts.size(); ++c)
        if (node->class_counts[c] > node->class_counts[best]) best = static_cast<int>(c);
    node->majority_class = best;
    node->leaf_accuracy =
        node->support > 0
            ? static_cast<double>(node->class_counts[node->majority_class]) / node->support
            : 0.0;
    for (std::size_t i = 0; i < n_children; ++i)
        node->children.push_back(read_node(r, n_classes));
    return node;
}

}  // namespace

void write_tree(std::ostream& out, const DecisionTree& tree) {
    out << "irdm tree 1\n";
    out << "min_leaf " << tree.params.min_leaf << '\n';
    out << "min_gain_ratio " << format_double(tree.params.min_gain_ratio) << '\n';
    out << "max_depth " << tree.params.max_depth << '\n';
    out << "attributes " << tree.schema.attributes.size() << '\n';
    for (std::size_t a = 0; a < tree.schema.attributes.size(); ++a) {
        const auto& attr = tree.schema.attributes[a];
        if (attr.kind == AttributeKind::numeric) {
            out << "attribute numeric 0 " << attr.name << '\n';
        } else {
            const auto& dict = a < tree.categories.size() ? tree.categories[a]
                                                          : std::vector<std::string>{};
            out << "attribute categorical " << dict.size() << ' ' << attr.name << '\n';
            for (const auto& cat : dict) out << "category " << cat << '\n';
        }
    }
    out << "bins " << tree.schema.class_bins.size() << '\n';
    for (const auto& bin : tree.schema.class_bins)
        out << "bin " << format_double(bin.lo) << ' ' << format_double(bin.hi) << ' ' << bin.label
            << '\n';
    out << "nodes\n";
    write_node(out, *tree.root);
}

DecisionTree read_tree(std::istream& in) {
    LineReader r{in};
    if (r.next() != "irdm tree 1") r.fail("not an irdm tree file");
    DecisionTree tree;

    auto expect_kv = [&](const char* key) {
        const auto toks = tokens_of(r.next());
        if (toks.size() != 2 || toks[0] != key) r.fail(std::string("expected '") + key + "'");
        return toks[1];
    };
    tree.params.min_leaf = to_int(r, expect_kv("min_leaf"));
    tree.params.min_gain_ratio = to_double(r, expect_kv("min_gain_ratio"));
    tree.params.max_depth = to_int(r, expect_kv("max_depth"));

    const int n_attr = to_int(r, expect_kv("attributes"));
    tree.categories.resize(n_attr);
    for (int a = 0; a < n_attr; ++a) {
        const std::string line = r.next();
        const auto toks = tokens_of(line);
        if (toks.size() < 4 || toks[0] != "attribute") r.fail("expected attribute line");
        Attribute attr;
        attr.name = rest_after(line, 3);
        if (toks[1] == "numeric") {
            attr.kind = AttributeKind::numeric;
        } else if (toks[1] == "categorical") {
            attr.kind = AttributeKind::categorical;
            const int n_cats = to_int(r, toks[2]);
            for (int c = 0; c < n_cats; ++c) {
                const std::string cat_line = r.next();
                if (cat_line.rfind("category ", 0) != 0) r.fail("expected category line");
                tree.categories[a].push_back(cat_line.substr(9));
            }
        } else {
            r.fail("unknown attribute kind '" + toks[1] + "'");
        }
        tree.schema.attributes.push_back(std::move(attr));
    }

    const int n_bins = to_int(r, expect_kv("bins"));
    for (int b = 0; b < n_bins; ++b) {
        const std::string line = r.next();
        const auto toks = tokens_of(line);
        if (toks.size() < 4 || toks[0] != "bin") r.fail("expected bin line");
        UsageBin bin;
        bin.lo = to_double(r, toks[1]);
        bin.hi = to_double(r, toks[2]);
        bin.label = rest_after(line, 3);
        tree.schema.class_bins.push_back(std::move(bin));
    }

    if (r.next() != "nodes") r.fail("expected 'nodes'");
    tree.root = read_node(r, tree.schema.class_bins.size());
    return tree;
}

void save_tree(const DecisionTree& tree, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    write_tree(out, tree);
    if (!out) throw ConfigError("failed writing " + path);
}

DecisionTree load_tree(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    return read_tree(in);
}

void write_forest(std::ostream& out, const Forest& forest) {
    out << "irdm forest 1\n";
    out << "num_trees " << forest.params.num_trees << '\n';
    out << "goodness " << format_double(forest.params.goodness) << '\n';
    out << "separation " << format_double(forest.params.separation) << '\n';
    out << "trees " << forest.trees.size() << '\n';
    for (const auto& tree : forest.trees) write_tree(out, tree);
}

Forest read_forest(std::istream& in) {
    LineReader r{in};
    if (r.next() != "irdm forest 1") r.fail("not an irdm forest file");
    Forest forest;
    auto expect_kv = [&](const char* key) {
        const auto toks = tokens_of(r.next());
        if (toks.size() != 2 || toks[0] != key) r.fail(std::string("expected '") + key + "'");
        return toks[1];
    };
    forest.params.num_trees = to_int(r, expect_kv("num_trees"));
    forest.params.goodness = to_double(r, expect_kv("goodness"));
    forest.params.separation = to_double(r, expect_kv("separation"));
    const int n_trees = to_int(r, expect_kv("trees"));
    for (int t = 0; t < n_trees; ++t) forest.trees.push_back(read_tree(in));
    forest.params.c45 = forest.trees.empty() ? C45Params{} : forest.trees.front().params;
    return forest;
}

void save_forest(const Forest& forest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    write_forest(out, forest);
    if (!out) throw ConfigError("failed writing " + path);
}

Forest load_forest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    return read_forest(in);
}

}  // namespace irdm
