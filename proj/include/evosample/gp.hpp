#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "evosample/dataset.hpp"
#include "evosample/fitness.hpp"
#include "evosample/rng.hpp"

namespace evosample::gp {

enum class Op { Add, Sub, Mul, Div };  // Div is protected: 0-denominator components yield 1

// Expression-tree node. Function nodes own two children; terminals are either
// a reference into the minority pool or a constant broadcast over features.
struct Node {
    enum class Kind { Function, MinRef, Constant };

    Kind kind = Kind::Constant;
    Op op = Op::Add;       // Function
    int index = 0;         // MinRef: index into the minority pool
    double value = 0.0;    // Constant: in [-1, 1]
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;

    static std::unique_ptr<Node> function(Op o, std::unique_ptr<Node> l, std::unique_ptr<Node> r);
    static std::unique_ptr<Node> min_ref(int pool_index);
    static std::unique_ptr<Node> constant(double v);
};

std::unique_ptr<Node> clone(const Node& n);

// Immutable value type; copying deep-copies the tree.
class Program {
public:
    Program() = default;
    explicit Program(std::unique_ptr<Node> root) : root_(std::move(root)) {}
    Program(const Program& other) : root_(other.root_ ? clone(*other.root_) : nullptr) {}
    Program& operator=(const Program& other) {
        if (this != &other) root_ = other.root_ ? clone(*other.root_) : nullptr;
        return *this;
    }
    Program(Program&&) noexcept = default;
    Program& operator=(Program&&) noexcept = default;

    bool empty() const { return root_ == nullptr; }
    const Node& root() const { return *root_; }
    std::unique_ptr<Node>& root_slot() { return root_; }

    // root counts as depth 1
    int depth() const;
    std::size_t node_count() const;

    // parenthesized prefix form, e.g. (mul (add min:1 min:7) (sub min:2 min:4))
    std::string to_text() const;
    static Program from_text(const std::string& text);

private:
    std::unique_ptr<Node> root_;
};

struct Population {
    std::vector<Program> programs;
    std::vector<FitnessValue> fitnesses;  // empty until evaluated
    bool evaluated() const { return fitnesses.size() == programs.size(); }
};

// Classic ramped half-and-half: depths cycle over [2, max_depth], alternating
// full and grow tree builders.
Population init_ramped_half_and_half(std::size_t pop_size, int max_depth,
                                     std::size_t minority_pool_size, Rng& rng);

// Fresh grow-built subtree of depth at most depth_budget.
std::unique_ptr<Node> random_subtree(int depth_budget, std::size_t minority_pool_size, Rng& rng);

// Evaluates the tree elementwise over the pool's feature vectors; constants
// broadcast. Throws EvalError on any non-finite intermediate.
Instance evaluate(const Program& p, const std::vector<Instance>& minority_pool);

// Subtree swap at independently uniform nodes of both parents. Offspring over
// max_depth retry point selection up to 8 times, then the parents are
// returned unchanged.
std::pair<Program, Program> crossover_standard(const Program& p1, const Program& p2, int max_depth,
                                               Rng& rng);

// One offspring: a random non-root subtree of target is replaced by a random
// subtree of aux_elite, so the root lineage stays with the target. A
// single-terminal target is returned unchanged.
Program crossover_transfer(const Program& target, const Program& aux_elite, int max_depth,
                           Rng& rng);

// Replaces a uniformly chosen node's subtree with a fresh grow-built subtree
// sized to respect max_depth.
Program mutate(const Program& p, int max_depth, std::size_t minority_pool_size, Rng& rng);

// Convenience over the fitness-level primitive; population must be evaluated.
std::size_t tournament_select(const Population& pop, std::size_t tournament_size, Rng& rng);

}  // namespace evosample::gp
