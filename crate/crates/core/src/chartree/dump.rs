use alloc::collections::VecDeque;
use alloc::string::String;
use core::fmt::{self, Write};
use hashbrown::HashMap;

use super::{CharTreeStore, RcId};

/// How a node was first reached from its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Root,
    Point,
    Set,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeKind::Root => "root",
            NodeKind::Point => "point",
            NodeKind::Set => "set",
        })
    }
}

/// One line per node reachable from `root`, in breadth-first order with
/// nodes renumbered from 0:
///
/// `id kind m p |children| child ids ... ; ordered structure`
///
/// Point children are listed before set children.
pub fn dump(store: &CharTreeStore, root: RcId) -> String {
    let mut local: HashMap<RcId, usize> = HashMap::new();
    let mut order = VecDeque::new();
    let mut queue = VecDeque::new();
    local.insert(root, 0);
    queue.push_back((root, NodeKind::Root));
    while let Some((id, kind)) = queue.pop_front() {
        order.push_back((id, kind));
        let node = store.node(id);
        let tagged = node
            .point_children()
            .iter()
            .map(|&c| (c, NodeKind::Point))
            .chain(node.set_children().iter().map(|&c| (c, NodeKind::Set)));
        for (c, k) in tagged {
            if !local.contains_key(&c) {
                local.insert(c, local.len());
                queue.push_back((c, k));
            }
        }
    }
    let mut out = String::new();
    for (id, kind) in order {
        let node = store.node(id);
        let ord = node.ord();
        let n = node.point_children().len() + node.set_children().len();
        let _ = write!(
            out,
            "{} {} {} {} {}",
            local[&id],
            kind,
            ord.point_count(),
            ord.set_count(),
            n
        );
        for c in node.children() {
            let _ = write!(out, " {}", local[&c]);
        }
        let _ = writeln!(out, " ; {ord}");
    }
    out
}
