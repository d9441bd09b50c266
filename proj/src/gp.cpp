#include "evosample/gp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace evosample::gp {

namespace {

constexpr int kDepthRetryLimit = 8;

const char* op_name(Op op) {
    switch (op) {
        case Op::Add: return "add";
        case Op::Sub: return "sub";
        case Op::Mul: return "mul";
        case Op::Div: return "div";
    }
    return "?";
}

int subtree_depth(const Node& n) {
    if (n.kind != Node::Kind::Function) return 1;
    return 1 + std::max(subtree_depth(*n.left), subtree_depth(*n.right));
}

std::size_t subtree_count(const Node& n) {
    if (n.kind != Node::Kind::Function) return 1;
    return 1 + subtree_count(*n.left) + subtree_count(*n.right);
}

// Owning slots in preorder, each paired with the node's depth (root = 1);
// swapping two slots swaps whole subtrees.
void collect_slots(std::unique_ptr<Node>& slot, int depth,
                   std::vector<std::pair<std::unique_ptr<Node>*, int>>& out) {
    out.emplace_back(&slot, depth);
    if (slot->kind == Node::Kind::Function) {
        collect_slots(slot->left, depth + 1, out);
        collect_slots(slot->right, depth + 1, out);
    }
}

void collect_const_nodes(const Node& n, std::vector<const Node*>& out) {
    out.push_back(&n);
    if (n.kind == Node::Kind::Function) {
        collect_const_nodes(*n.left, out);
        collect_const_nodes(*n.right, out);
    }
}

std::unique_ptr<Node> random_terminal(std::size_t pool_size, Rng& rng) {
    // the terminal set is every minority instance plus one ephemeral constant
    std::size_t slot = rng.index(pool_size + 1);
    if (slot < pool_size) return Node::min_ref(static_cast<int>(slot));
    return Node::constant(rng.range(-1.0, 1.0));
}

Op random_op(Rng& rng) { return static_cast<Op>(rng.index(4)); }

std::unique_ptr<Node> build_full(int depth_budget, std::size_t pool_size, Rng& rng) {
    if (depth_budget <= 1) return random_terminal(pool_size, rng);
    Op op = random_op(rng);
    auto l = build_full(depth_budget - 1, pool_size, rng);
    auto r = build_full(depth_budget - 1, pool_size, rng);
    return Node::function(op, std::move(l), std::move(r));
}

std::unique_ptr<Node> build_grow(int depth_budget, std::size_t pool_size, Rng& rng,
                                 bool force_function) {
    if (depth_budget <= 1) return random_terminal(pool_size, rng);
    if (!force_function && rng.chance(0.5)) return random_terminal(pool_size, rng);
    Op op = random_op(rng);
    auto l = build_grow(depth_budget - 1, pool_size, rng, false);
    auto r = build_grow(depth_budget - 1, pool_size, rng, false);
    return Node::function(op, std::move(l), std::move(r));
}

void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

std::unique_ptr<Node> parse_node(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    if (i >= s.size()) throw ParseError("unexpected end of program text");
    if (s[i] == '(') {
        ++i;
        skip_ws(s, i);
        std::size_t start = i;
        while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
        std::string name = s.substr(start, i - start);
        Op op;
        if (name == "add") op = Op::Add;
        else if (name == "sub") op = Op::Sub;
        else if (name == "mul") op = Op::Mul;
        else if (name == "div") op = Op::Div;
        else throw ParseError("unknown operator '" + name + "' in program text");
        auto l = parse_node(s, i);
        auto r = parse_node(s, i);
        skip_ws(s, i);
        if (i >= s.size() || s[i] != ')') throw ParseError("expected ')' in program text");
        ++i;
        return Node::function(op, std::move(l), std::move(r));
    }
    if (s.compare(i, 4, "min:") == 0) {
        i += 4;
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw ParseError("min: terminal without an index");
        return Node::min_ref(std::stoi(s.substr(start, i - start)));
    }
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ')') ++i;
    try {
        return Node::constant(std::stod(s.substr(start, i - start)));
    } catch (const std::exception&) {
        throw ParseError("bad terminal '" + s.substr(start, i - start) + "' in program text");
    }
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Function:
            out += '(';
            out += op_name(n.op);
            out += ' ';
            print_node(*n.left, out);
            out += ' ';
            print_node(*n.right, out);
            out += ')';
            break;
        case Node::Kind::MinRef:
            out += "min:";
            out += std::to_string(n.index);
            break;
        case Node::Kind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            out += buf;
            break;
        }
    }
}

Instance eval_node(const Node& n, const std::vector<Instance>& pool, std::size_t width) {
    Instance out;
    switch (n.kind) {
        case Node::Kind::MinRef:
            if (n.index < 0 || static_cast<std::size_t>(n.index) >= pool.size())
                throw ValidationError("minority pool index out of range");
            return pool[static_cast<std::size_t>(n.index)];
        case Node::Kind::Constant:
            return Instance(width, n.value);
        case Node::Kind::Function: {
            Instance l = eval_node(*n.left, pool, width);
            Instance r = eval_node(*n.right, pool, width);
            out.resize(width);
            for (std::size_t i = 0; i < width; ++i) {
                switch (n.op) {
                    case Op::Add: out[i] = l[i] + r[i]; break;
                    case Op::Sub: out[i] = l[i] - r[i]; break;
                    case Op::Mul: out[i] = l[i] * r[i]; break;
                    case Op::Div: out[i] = r[i] == 0.0 ? 1.0 : l[i] / r[i]; break;
                }
                if (!std::isfinite(out[i])) throw EvalError("non-finite intermediate value");
            }
            return out;
        }
    }
    throw ValidationError("corrupt program node");
}

}  // namespace

std::unique_ptr<Node> Node::function(Op o, std::unique_ptr<Node> l, std::unique_ptr<Node> r) {
    auto n = std::make_unique<Node>();
    n->kind = Kind::Function;
    n->op = o;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

std::unique_ptr<Node> Node::min_ref(int pool_index) {
    auto n = std::make_unique<Node>();
    n->kind = Kind::MinRef;
    n->index = pool_index;
    return n;
}

std::unique_ptr<Node> Node::constant(double v) {
    auto n = std::make_unique<Node>();
    n->kind = Kind::Constant;
    n->value = v;
    return n;
}

std::unique_ptr<Node> clone(const Node& n) {
    auto c = std::make_unique<Node>();
    c->kind = n.kind;
    c->op = n.op;
    c->index = n.index;
    c->value = n.value;
    if (n.kind == Node::Kind::Function) {
        c->left = clone(*n.left);
        c->right = clone(*n.right);
    }
    return c;
}

int Program::depth() const { return root_ ? subtree_depth(*root_) : 0; }

std::size_t Program::node_count() const { return root_ ? subtree_count(*root_) : 0; }

std::string Program::to_text() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

Program Program::from_text(const std::string& text) {
    std::size_t i = 0;
    auto root = parse_node(text, i);
    skip_ws(text, i);
    if (i != text.size()) throw ParseError("trailing characters after program text");
    return Program(std::move(root));
}

Population init_ramped_half_and_half(std::size_t pop_size, int max_depth,
                                     std::size_t minority_pool_size, Rng& rng) {
    if (pop_size < 2) throw ValidationError("population size must be at least 2");
    if (max_depth < 2) throw ValidationError("max depth must be at least 2");
    if (minority_pool_size < 1) throw ValidationError("minority pool must be nonempty");

    Population pop;
    pop.programs.reserve(pop_size);
    int depth_levels = max_depth - 1;  // depths 2..max_depth
    for (std::size_t i = 0; i < pop_size; ++i) {
        int depth = 2 + static_cast<int>((i / 2) % static_cast<std::size_t>(depth_levels));
        bool full = (i % 2) == 0;
        std::unique_ptr<Node> root =
            full ? build_full(depth, minority_pool_size, rng)
                 : build_grow(depth, minority_pool_size, rng, /*force_function=*/true);
        pop.programs.emplace_back(std::move(root));
    }
    return pop;
}

std::unique_ptr<Node> random_subtree(int depth_budget, std::size_t minority_pool_size, Rng& rng) {
    if (depth_budget < 1) throw ValidationError("depth budget must be positive");
    return build_grow(depth_budget, minority_pool_size, rng, false);
}

Instance evaluate(const Program& p, const std::vector<Instance>& minority_pool) {
    if (p.empty()) throw ValidationError("cannot evaluate an empty program");
    if (minority_pool.empty()) throw ValidationError("minority pool is empty");
    return eval_node(p.root(), minority_pool, minority_pool.front().size());
}

std::pair<Program, Program> crossover_standard(const Program& p1, const Program& p2, int max_depth,
                                               Rng& rng) {
    if (p1.empty() || p2.empty()) throw ValidationError("crossover on an empty program");
    for (int attempt = 0; attempt <= kDepthRetryLimit; ++attempt) {
        Program c1 = p1;
        Program c2 = p2;
        std::vector<std::pair<std::unique_ptr<Node>*, int>> slots1;
        std::vector<std::pair<std::unique_ptr<Node>*, int>> slots2;
        collect_slots(c1.root_slot(), 1, slots1);
        collect_slots(c2.root_slot(), 1, slots2);
        auto& slot1 = *slots1[rng.index(slots1.size())].first;
        auto& slot2 = *slots2[rng.index(slots2.size())].first;
        std::swap(slot1, slot2);
        if (c1.depth() <= max_depth && c2.depth() <= max_depth)
            return {std::move(c1), std::move(c2)};
    }
    return {p1, p2};
}

Program crossover_transfer(const Program& target, const Program& aux_elite, int max_depth,
                           Rng& rng) {
    if (target.empty() || aux_elite.empty()) throw ValidationError("crossover on an empty program");
    if (target.node_count() < 2) return target;  // no non-root crossover point

    std::vector<const Node*> aux_nodes;
    collect_const_nodes(aux_elite.root(), aux_nodes);

    for (int attempt = 0; attempt <= kDepthRetryLimit; ++attempt) {
        Program child = target;
        std::vector<std::pair<std::unique_ptr<Node>*, int>> slots;
        collect_slots(child.root_slot(), 1, slots);
        auto& point = slots[1 + rng.index(slots.size() - 1)];  // root excluded
        const Node* graft = aux_nodes[rng.index(aux_nodes.size())];
        *point.first = clone(*graft);
        if (child.depth() <= max_depth) return child;
    }
    return target;
}

Program mutate(const Program& p, int max_depth, std::size_t minority_pool_size, Rng& rng) {
    if (p.empty()) throw ValidationError("mutate on an empty program");
    Program child = p;
    std::vector<std::pair<std::unique_ptr<Node>*, int>> slots;
    collect_slots(child.root_slot(), 1, slots);
    auto& [slot, depth] = slots[rng.index(slots.size())];
    int budget = max_depth - depth + 1;  // cannot exceed max_depth by construction
    int target_depth = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(budget)));
    *slot = build_grow(target_depth, minority_pool_size, rng, false);
    return child;
}

std::size_t tournament_select(const Population& pop, std::size_t tournament_size, Rng& rng) {
    if (!pop.evaluated()) throw ValidationError("tournament on an unevaluated population");
    return evosample::tournament_select(pop.fitnesses, tournament_size, rng);
}

}  // namespace evosample::gp
