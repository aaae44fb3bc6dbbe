"""Search-tree substrate shared by the local solvers and the global planner."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
import itertools
import logging
from typing import Dict, Iterator, List, Optional, Set, Tuple

from ..core.models import Arrangement, ObjectId
from ..core.world import StateCodec
from ..manipulation.oracle import EdgeOracle, EdgePaths

logger = logging.getLogger(__name__)

StateKey = Tuple[str, ...]


class EdgeStatus(str, Enum):
    UNVERIFIED = "unverified"
    VERIFIED = "verified"


class EdgeKind(str, Enum):
    GOAL = "goal"
    BUFFER = "buffer"


class SearchMode(str, Enum):
    BACKTRACKING = "backtracking"
    BACKJUMPING = "backjumping"


@dataclass(eq=False)
class TreeNode:
    """An arrangement in a tree plus the edge that reached it from its parent."""

    node_id: int
    arrangement: Arrangement
    key: StateKey
    parent: Optional["TreeNode"] = None
    moved_object: Optional[ObjectId] = None
    edge_status: EdgeStatus = EdgeStatus.VERIFIED
    edge_kind: EdgeKind = EdgeKind.GOAL
    edge_paths: Optional[EdgePaths] = None
    depth: int = 0
    skipped_by: Set[int] = field(default_factory=set, repr=False)

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def verified(self) -> bool:
        return self.edge_status is EdgeStatus.VERIFIED

    def __repr__(self) -> str:
        return f"TreeNode(id={self.node_id}, key={','.join(self.key)}, {self.edge_status.value})"


class SearchTree:
    """Arrangement nodes indexed by canonical key, with lazy or verified edges.

    ``unique`` trees hold at most one node per arrangement. Deleting a subtree
    reopens every node that once skipped one of the deleted arrangements.
    """

    def __init__(self, codec: StateCodec, root: Arrangement, *, unique: bool = True) -> None:
        self.codec = codec
        self.unique = unique
        self.mode = SearchMode.BACKTRACKING
        self.backjump_target: Optional[TreeNode] = None
        self.rejected_edges: Set[Tuple[StateKey, ObjectId]] = set()
        self.trimmed_nodes = 0
        self._ids = itertools.count()
        self._nodes: Dict[int, TreeNode] = {}
        self._children: Dict[int, List[TreeNode]] = {}
        self._index: Dict[StateKey, TreeNode] = {}
        self._reopened: List[TreeNode] = []
        self.root = self._register(TreeNode(next(self._ids), root, codec.key(root)))

    def _register(self, node: TreeNode) -> TreeNode:
        self._nodes[node.node_id] = node
        self._children[node.node_id] = []
        self._index.setdefault(node.key, node)
        if node.parent is not None:
            self._children[node.parent.node_id].append(node)
        return node

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node: object) -> bool:
        return isinstance(node, TreeNode) and self._nodes.get(node.node_id) is node

    def __iter__(self) -> Iterator[TreeNode]:
        return iter(list(self._nodes.values()))

    def nodes(self) -> List[TreeNode]:
        return list(self._nodes.values())

    def key_of(self, arrangement: Arrangement) -> StateKey:
        return self.codec.key(arrangement)

    def find(self, arrangement: Arrangement) -> Optional[TreeNode]:
        return self._index.get(self.codec.key(arrangement))

    def find_key(self, key: StateKey) -> Optional[TreeNode]:
        return self._index.get(key)

    def children(self, node: TreeNode) -> List[TreeNode]:
        return list(self._children.get(node.node_id, ()))

    def add(
        self,
        parent: TreeNode,
        arrangement: Arrangement,
        moved_object: ObjectId,
        *,
        status: EdgeStatus = EdgeStatus.UNVERIFIED,
        kind: EdgeKind = EdgeKind.GOAL,
        paths: Optional[EdgePaths] = None,
    ) -> TreeNode:
        if parent not in self:
            raise KeyError(f"parent {parent.node_id} is not in the tree")
        key = self.codec.key(arrangement)
        if self.unique and key in self._index:
            raise ValueError(f"arrangement {','.join(key)} is already in the tree")
        if status is EdgeStatus.VERIFIED and paths is None:
            raise ValueError("verified edges carry their paths")
        node = TreeNode(
            node_id=next(self._ids),
            arrangement=arrangement,
            key=key,
            parent=parent,
            moved_object=moved_object,
            edge_status=status,
            edge_kind=kind,
            edge_paths=paths,
            depth=parent.depth + 1,
        )
        return self._register(node)

    def mark_verified(self, node: TreeNode, paths: EdgePaths) -> None:
        node.edge_status = EdgeStatus.VERIFIED
        node.edge_paths = paths

    def reparent(
        self,
        node: TreeNode,
        parent: TreeNode,
        moved_object: ObjectId,
        paths: EdgePaths,
        *,
        kind: EdgeKind = EdgeKind.GOAL,
    ) -> None:
        """Hang ``node`` and its subtree under ``parent`` through a verified edge."""

        if node.is_root:
            raise ValueError("the root cannot be moved")
        if parent not in self:
            raise KeyError(f"parent {parent.node_id} is not in the tree")
        if node in self.root_path(parent):
            raise ValueError(f"node {node.node_id} is an ancestor of {parent.node_id}")
        assert node.parent is not None
        self._children[node.parent.node_id].remove(node)
        self._children[parent.node_id].append(node)
        node.parent = parent
        node.moved_object = moved_object
        node.edge_kind = kind
        self.mark_verified(node, paths)
        stack = [node]
        while stack:
            current = stack.pop()
            current.depth = current.parent.depth + 1 if current.parent is not None else 0
            stack.extend(self._children[current.node_id])

    def note_skip(self, parent: TreeNode, existing: TreeNode) -> None:
        """Record that ``parent`` did not add a child because ``existing`` holds its arrangement."""
        existing.skipped_by.add(parent.node_id)

    def reject_edge(self, parent: TreeNode, obj: ObjectId) -> None:
        self.rejected_edges.add((parent.key, obj))

    def is_rejected(self, parent: TreeNode, obj: ObjectId) -> bool:
        return (parent.key, obj) in self.rejected_edges

    def root_path(self, node: TreeNode) -> List[TreeNode]:
        path = []
        current: Optional[TreeNode] = node
        while current is not None:
            path.append(current)
            current = current.parent
        return path[::-1]

    def is_accessible(self, node: TreeNode) -> bool:
        return all(step.verified for step in self.root_path(node))

    def delete_subtree(self, node: TreeNode) -> List[TreeNode]:
        """Remove ``node`` and its descendants; returns them in pre-order."""

        if node.is_root:
            raise ValueError("the root cannot be deleted")
        removed: List[TreeNode] = []
        stack = [node]
        while stack:
            current = stack.pop()
            removed.append(current)
            stack.extend(reversed(self._children.get(current.node_id, ())))
        siblings = self._children[node.parent.node_id]
        siblings.remove(node)
        for current in removed:
            del self._nodes[current.node_id]
            del self._children[current.node_id]
            if self._index.get(current.key) is current:
                del self._index[current.key]
        for current in removed:
            for parent_id in sorted(current.skipped_by):
                holder = self._nodes.get(parent_id)
                if holder is not None and holder not in self._reopened:
                    self._reopened.append(holder)
        self.trimmed_nodes += len(removed)
        logger.debug("trimmed %d nodes under %s", len(removed), node)
        return removed

    def reopen(self, node: TreeNode) -> None:
        if node in self and node not in self._reopened:
            self._reopened.append(node)

    def drain_reopened(self) -> List[TreeNode]:
        pending = [node for node in self._reopened if node in self]
        self._reopened = []
        return pending

    def start_backjump(self, target: TreeNode) -> None:
        self.mode = SearchMode.BACKJUMPING
        self.backjump_target = target

    def reset_mode(self) -> None:
        self.mode = SearchMode.BACKTRACKING
        self.backjump_target = None

    def well_formed(self) -> bool:
        """Index covers exactly the live nodes and every parent is live."""

        for node in self._nodes.values():
            if node.parent is not None and node.parent not in self:
                return False
            if self.unique and self._index.get(node.key) is not node:
                return False
        return all(node in self for node in self._index.values())


@dataclass(frozen=True)
class BranchCheck:
    success: bool
    last: TreeNode
    trimmed: Tuple[TreeNode, ...] = ()


def verify_branch(tree: SearchTree, node: TreeNode, verifier: EdgeOracle) -> BranchCheck:
    """Verify the unverified edges on the root path of ``node``, top down.

    Starts below the deepest node whose whole root path is already verified. On
    the first failure the subtree under the failing edge is deleted and the last
    accessible node is returned.
    """

    path = tree.root_path(node)
    index = 0
    while index + 1 < len(path) and path[index + 1].verified:
        index += 1
    last = path[index]
    for child in path[index + 1 :]:
        if child.verified:
            last = child
            continue
        parent = child.parent
        assert parent is not None
        paths = verifier.verify_edge(parent.arrangement, child.arrangement)
        if paths is None:
            tree.reject_edge(parent, child.moved_object)
            trimmed = tree.delete_subtree(child)
            logger.debug("branch to %s failed below %s", node, last)
            return BranchCheck(False, last, tuple(trimmed))
        tree.mark_verified(child, paths)
        last = child
    return BranchCheck(True, last)


__all__ = [
    "BranchCheck",
    "EdgeKind",
    "EdgeStatus",
    "SearchMode",
    "SearchTree",
    "StateKey",
    "TreeNode",
    "verify_branch",
]
