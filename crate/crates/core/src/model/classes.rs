use std::collections::{HashMap, HashSet};

use crate::error::ValidationIssue;

/// Name reserved for the root class of every hospital.
pub const ROOT_CLASS: &str = "*";

/// One class of a hospital's laminar family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub name: String,
    /// Members in the owning hospital's preference order.
    pub members: Vec<usize>,
    pub quota: u32,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
}

/// The laminar classification of one hospital, stored in DFS preorder.
///
/// Index 0 is always the root class, which holds the whole preference list
/// with quota equal to the hospital capacity. Children of a class are ordered
/// by the rank of their most preferred member, so the layout depends only on
/// the member sets and not on the order classes were declared in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTree {
    classes: Vec<Class>,
    deepest: HashMap<usize, usize>,
}

/// A declared class before the tree is assembled.
#[derive(Debug, Clone)]
pub(crate) struct ClassSpec {
    pub name: String,
    pub members: Vec<usize>,
    pub quota: u32,
}

impl ClassTree {
    /// Assembles the tree for a hospital whose preference list is `prefs`.
    ///
    /// `resident_name` and `hospital` are only used for error messages. A
    /// declared class whose members equal the whole list is taken as the
    /// root and its quota must match `capacity`.
    pub(crate) fn build(
        hospital: &str,
        prefs: &[usize],
        capacity: u32,
        declared: Vec<ClassSpec>,
        resident_name: &dyn Fn(usize) -> String,
    ) -> Result<ClassTree, Vec<ValidationIssue>> {
        let mut issues = Vec::new();
        let rank: HashMap<usize, usize> = prefs.iter().enumerate().map(|(i, &r)| (r, i)).collect();

        let mut specs = vec![ClassSpec { name: ROOT_CLASS.to_string(), members: prefs.to_vec(), quota: capacity }];
        let mut seen_names = HashSet::new();
        for mut spec in declared {
            if !seen_names.insert(spec.name.clone()) {
                issues.push(ValidationIssue::DuplicateIdentifier { name: format!("{hospital}.{}", spec.name) });
                continue;
            }
            let mut inside = true;
            for &r in &spec.members {
                if !rank.contains_key(&r) {
                    inside = false;
                    issues.push(ValidationIssue::ClassOutsidePreflist {
                        hospital: hospital.to_string(),
                        class: spec.name.clone(),
                        resident: resident_name(r),
                    });
                }
            }
            if !inside {
                continue;
            }
            spec.members.sort_by_key(|r| rank[r]);
            let before = spec.members.len();
            spec.members.dedup();
            if spec.members.len() != before {
                issues.push(ValidationIssue::DuplicatePrefEntry {
                    owner: format!("class {hospital}.{}", spec.name),
                    entry: "a resident".to_string(),
                });
                continue;
            }
            if spec.members.len() == prefs.len() {
                // Same set as the root.
                if spec.quota != capacity {
                    issues.push(ValidationIssue::BadQuota {
                        hospital: hospital.to_string(),
                        detail: format!(
                            "class {} covers the whole list but has quota {} instead of capacity {}",
                            spec.name, spec.quota, capacity
                        ),
                    });
                }
                continue;
            }
            specs.push(spec);
        }

        let sets: Vec<HashSet<usize>> = specs.iter().map(|s| s.members.iter().copied().collect()).collect();
        for i in 1..specs.len() {
            for j in (i + 1)..specs.len() {
                let common = sets[i].intersection(&sets[j]).count();
                if common == 0 {
                    continue;
                }
                if common == sets[i].len() && common == sets[j].len() {
                    issues.push(ValidationIssue::DuplicateClass {
                        hospital: hospital.to_string(),
                        first: specs[i].name.clone(),
                        second: specs[j].name.clone(),
                    });
                } else if common != sets[i].len() && common != sets[j].len() {
                    issues.push(ValidationIssue::NonLaminar {
                        hospital: hospital.to_string(),
                        first: specs[i].name.clone(),
                        second: specs[j].name.clone(),
                    });
                }
            }
        }
        if !issues.is_empty() {
            return Err(issues);
        }

        // Parent of a class is its smallest strict superset.
        let n = specs.len();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for i in 1..n {
            let mut best: Option<usize> = None;
            for j in 0..n {
                if i == j || sets[j].len() <= sets[i].len() || !sets[i].is_subset(&sets[j]) {
                    continue;
                }
                if best.is_none_or(|b| sets[j].len() < sets[b].len()) {
                    best = Some(j);
                }
            }
            parent[i] = best;
        }
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 1..n {
            // Every non-root class is a strict subset of the root.
            children[parent[i].expect("non-root class has a parent")].push(i);
        }
        let first_rank = |i: usize| specs[i].members.first().map_or(usize::MAX, |r| rank[r]);
        for c in &mut children {
            c.sort_by_key(|&i| first_rank(i));
        }

        let mut order = Vec::with_capacity(n);
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            order.push(i);
            stack.extend(children[i].iter().rev());
        }
        let mut position = vec![0usize; n];
        for (pos, &i) in order.iter().enumerate() {
            position[i] = pos;
        }

        let mut classes: Vec<Class> = Vec::with_capacity(n);
        for &i in &order {
            let parent_pos = parent[i].map(|p| position[p]);
            let depth = parent_pos.map_or(0, |p| classes[p].depth + 1);
            classes.push(Class {
                name: specs[i].name.clone(),
                members: specs[i].members.clone(),
                quota: specs[i].quota,
                parent: parent_pos,
                children: children[i].iter().map(|&c| position[c]).collect(),
                depth,
            });
        }

        let mut deepest = HashMap::new();
        for (idx, class) in classes.iter().enumerate() {
            for &r in &class.members {
                let entry = deepest.entry(r).or_insert(idx);
                if classes[*entry].depth < class.depth {
                    *entry = idx;
                }
            }
        }

        Ok(ClassTree { classes, deepest })
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn class(&self, idx: usize) -> &Class {
        &self.classes[idx]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn root(&self) -> &Class {
        &self.classes[0]
    }

    /// Deepest class containing `resident`, or `None` if the hospital does not list them.
    pub fn leaf_of(&self, resident: usize) -> Option<usize> {
        self.deepest.get(&resident).copied()
    }

    /// Classes containing `resident`, deepest first and ending at the root.
    pub fn chain(&self, resident: usize) -> Chain<'_> {
        Chain { tree: self, next: self.leaf_of(resident) }
    }

    pub fn contains(&self, class: usize, resident: usize) -> bool {
        self.chain(resident).any(|c| c == class)
    }

    /// Per-class counts of `residents`; `None` if someone is not in the tree.
    pub fn counts<I: IntoIterator<Item = usize>>(&self, residents: I) -> Option<Vec<u32>> {
        let mut counts = vec![0u32; self.classes.len()];
        for r in residents {
            self.leaf_of(r)?;
            for c in self.chain(r) {
                counts[c] += 1;
            }
        }
        Some(counts)
    }

    pub fn within_quotas(&self, counts: &[u32]) -> bool {
        counts.iter().zip(&self.classes).all(|(&n, c)| n <= c.quota)
    }
}

pub struct Chain<'a> {
    tree: &'a ClassTree,
    next: Option<usize>,
}

impl Iterator for Chain<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let cur = self.next?;
        self.next = self.tree.classes[cur].parent;
        Some(cur)
    }
}
