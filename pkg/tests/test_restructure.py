import random

import pytest

from combiclust.compare import partition_edit_cost
from combiclust.core import Partition
from combiclust.restructure import (RestructureError, apply_operations,
                                    derive_operations, knapsack_dp,
                                    knapsack_enumerate, multiple_choice_dp,
                                    multiple_choice_enumerate,
                                    restructure_one_stage)

from cases import (RESTRUCT_OP_ITEMS, RESTRUCT_S1, RESTRUCT_S2, RESTRUCT_STAR,
                   RESTRUCT_THREE_OP_COSTS)


class TestKnapsack:
    def test_item_too_heavy(self):
        assert knapsack_dp([(10.0, 5.0)], 4.0) == ()

    def test_small_instance(self):
        chosen = knapsack_dp([(6.0, 3.0), (5.0, 2.0), (4.0, 2.0)], 4.0)
        assert chosen == (1, 2)

    def test_zero_weights_all_selected(self):
        assert knapsack_dp([(1.0, 0.0), (2.0, 0.0)], 0.0) == (0, 1)

    def test_negative_capacity(self):
        with pytest.raises(RestructureError):
            knapsack_dp([(1.0, 1.0)], -1.0)

    def test_against_enumeration(self):
        rng = random.Random(41)
        for _ in range(100):
            n = rng.randint(1, 12)
            items = [(round(rng.uniform(0, 9), 2), float(rng.randint(0, 6)))
                     for _ in range(n)]
            cap = float(rng.randint(0, 12))
            chosen = knapsack_dp(items, cap)
            value = sum(items[i][0] for i in chosen)
            weight = sum(items[i][1] for i in chosen)
            assert weight <= cap + 1e-9
            assert value == pytest.approx(knapsack_enumerate(items, cap))

    def test_fractional_weights_at_resolution(self):
        chosen = knapsack_dp([(3.0, 0.25), (2.0, 0.5)], 0.6)
        assert chosen == (0,)


class TestMultipleChoice:
    def test_single_group(self):
        choice, profit = multiple_choice_dp([[(3.0, 1.0), (5.0, 2.0)]], 2.0)
        assert choice == (1,)
        assert profit == 5.0

    def test_zero_budget_forces_none_options(self):
        groups = [[(0.0, 0.0), (9.0, 1.0)], [(0.0, 0.0), (7.0, 2.0)]]
        choice, profit = multiple_choice_dp(groups, 0.0)
        assert choice == (0, 0)
        assert profit == 0.0

    def test_infeasible_raises(self):
        with pytest.raises(RestructureError):
            multiple_choice_dp([[(5.0, 3.0)]], 1.0)

    def test_against_enumeration(self):
        rng = random.Random(43)
        for _ in range(100):
            groups = []
            total_options = 0
            while total_options < 4 or len(groups) < 2:
                size = rng.randint(1, 4)
                groups.append([(round(rng.uniform(0, 9), 2),
                                float(rng.randint(0, 4)))
                               for _ in range(size)])
                total_options += size
                if total_options >= 12:
                    break
            cap = float(rng.randint(0, 10))
            oracle = multiple_choice_enumerate(groups, cap)
            if oracle is None:
                with pytest.raises(RestructureError):
                    multiple_choice_dp(groups, cap)
            else:
                _, profit = multiple_choice_dp(groups, cap)
                assert profit == pytest.approx(oracle)


class TestDeriveOperations:
    def test_compressed_set(self):
        ops = derive_operations(RESTRUCT_S1, RESTRUCT_S2)
        assert tuple(op.item for op in ops) == RESTRUCT_OP_ITEMS
        # one relocation per unit of edit distance
        assert len(ops) == partition_edit_cost(RESTRUCT_S1, RESTRUCT_S2).cost

    def test_moves_by_item(self):
        ops = {op.item: op for op in derive_operations(RESTRUCT_S1, RESTRUCT_S2)}
        assert set(ops[1].source) == {1, 3, 8}
        assert set(ops[1].target) == {5, 6, 9}
        assert set(ops[2].target) == {1, 3, 8}
        assert set(ops[4].target) == {5, 6, 9}
        assert set(ops[5].target) == {2, 4, 7}
        assert set(ops[8].target) == {2, 4, 7}

    def test_applying_all_reaches_goal(self):
        ops = derive_operations(RESTRUCT_S1, RESTRUCT_S2)
        assert apply_operations(RESTRUCT_S1, ops) == RESTRUCT_S2

    def test_identical_partitions_no_ops(self):
        assert derive_operations(RESTRUCT_S1, RESTRUCT_S1) == ()


class TestOneStage:
    def test_full_budget_reaches_goal(self):
        plan = restructure_one_stage(RESTRUCT_S1, RESTRUCT_S2, budget=5.0)
        assert plan.result == RESTRUCT_S2
        assert plan.residual_distance == 0

    def test_zero_budget_keeps_initial(self):
        plan = restructure_one_stage(RESTRUCT_S1, RESTRUCT_S2, budget=0.0)
        assert plan.result == RESTRUCT_S1
        assert plan.residual_distance == \
            partition_edit_cost(RESTRUCT_S1, RESTRUCT_S2).cost

    def test_three_operation_plan(self):
        plan = restructure_one_stage(RESTRUCT_S1, RESTRUCT_S2, budget=3.0,
                                     op_costs=RESTRUCT_THREE_OP_COSTS)
        assert tuple(op.item for op in plan.selected) == (2, 4, 8)
        assert plan.result == RESTRUCT_STAR

    @pytest.mark.xfail(
        strict=True,
        reason="the three-operation target partition is reachable only by "
               "moving items 2, 4 and 8; the published claim that items "
               "2, 8 and 1 reach it is a slip (those moves leave clusters "
               "{2,3}/{4,7,8}/{1,5,6,9})")
    def test_published_item_triple_reaches_star(self):
        ops = [op for op in derive_operations(RESTRUCT_S1, RESTRUCT_S2)
               if op.item in (1, 2, 8)]
        assert apply_operations(RESTRUCT_S1, ops) == RESTRUCT_STAR

    def test_residual_identity_unit_profits(self):
        base = partition_edit_cost(RESTRUCT_S1, RESTRUCT_S2).cost
        for budget in range(6):
            plan = restructure_one_stage(RESTRUCT_S1, RESTRUCT_S2,
                                         budget=float(budget))
            assert len(plan.selected) + plan.residual_distance == base

    def test_residual_monotone_in_budget(self):
        prev = None
        for budget in range(7):
            plan = restructure_one_stage(RESTRUCT_S1, RESTRUCT_S2,
                                         budget=float(budget))
            if prev is not None:
                assert plan.residual_distance <= prev
            prev = plan.residual_distance

    def test_budget_respected(self):
        plan = restructure_one_stage(RESTRUCT_S1, RESTRUCT_S2, budget=2.0,
                                     op_costs={i: 1.5 for i in range(1, 10)})
        assert plan.total_cost <= 2.0

    def test_negative_budget(self):
        with pytest.raises(RestructureError):
            restructure_one_stage(RESTRUCT_S1, RESTRUCT_S2, budget=-1.0)

    def test_universe_mismatch(self):
        with pytest.raises(RestructureError):
            restructure_one_stage(Partition.of((1,)), Partition.of((2,)), 1.0)
