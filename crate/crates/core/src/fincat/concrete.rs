use std::collections::{HashMap, VecDeque};

use super::FiniteCategory;

/// Builds a finite category as the subcategory of finite sets generated by
/// some named functions. Two composites are the same morphism exactly when
/// they are the same function, so the generators must be pairwise distinct
/// functions.
#[derive(Clone, Debug, Default)]
pub struct ConcreteBuilder {
    objects: Vec<(String, usize)>,
    arrows: Vec<(String, usize, usize, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConcreteError {
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("arrow {0} is not a function between the carriers of its ends")]
    BadFunction(String),
    #[error("arrow {0} coincides with an identity or an earlier arrow")]
    Duplicate(String),
}

impl ConcreteBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: &str, size: usize) -> Self {
        self.objects.push((name.to_string(), size));
        self
    }

    pub fn arrow(mut self, name: &str, dom: &str, cod: &str, map: &[usize]) -> Self {
        let find = |o: &str| self.objects.iter().position(|(n, _)| n == o).unwrap_or(usize::MAX);
        let (d, c) = (find(dom), find(cod));
        self.arrows.push((name.to_string(), d, c, map.to_vec()));
        self
    }

    pub fn build(self) -> Result<FiniteCategory, ConcreteError> {
        let k = self.objects.len();
        for (name, d, c, map) in &self.arrows {
            if *d >= k || *c >= k {
                return Err(ConcreteError::UnknownObject(name.clone()));
            }
            if map.len() != self.objects[*d].1 || map.iter().any(|&v| v >= self.objects[*c].1) {
                return Err(ConcreteError::BadFunction(name.clone()));
            }
        }
        let mut names = Vec::new();
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        let mut ident = Vec::new();
        for (x, (name, size)) in self.objects.iter().enumerate() {
            let map: Vec<usize> = (0..*size).collect();
            index.insert((x, x, map.clone()), names.len());
            ident.push(names.len());
            names.push(format!("1_{name}"));
            dom.push(x);
            cod.push(x);
            maps.push(map);
        }
        let mut queue = VecDeque::new();
        for (name, d, c, map) in &self.arrows {
            if index.contains_key(&(*d, *c, map.clone())) {
                return Err(ConcreteError::Duplicate(name.clone()));
            }
            index.insert((*d, *c, map.clone()), names.len());
            queue.push_back(names.len());
            names.push(name.clone());
            dom.push(*d);
            cod.push(*c);
            maps.push(map.clone());
        }
        // Close under postcomposition with generators, breadth first so that
        // every composite is named after a shortest path.
        while let Some(f) = queue.pop_front() {
            for (gname, gd, gc, gmap) in &self.arrows {
                if *gd != cod[f] {
                    continue;
                }
                let map: Vec<usize> = maps[f].iter().map(|&v| gmap[v]).collect();
                let key = (dom[f], *gc, map.clone());
                if index.contains_key(&key) {
                    continue;
                }
                index.insert(key, names.len());
                queue.push_back(names.len());
                names.push(format!("{gname}.{}", names[f]));
                dom.push(dom[f]);
                cod.push(*gc);
                maps.push(map);
            }
        }
        let obj_names = self.objects.iter().map(|(n, _)| n.clone()).collect();
        Ok(FiniteCategory::from_tables(obj_names, names, dom.clone(), cod.clone(), ident, |g, f| {
            let map: Vec<usize> = maps[f].iter().map(|&v| maps[g][v]).collect();
            index[&(dom[f], cod[g], map)]
        }))
    }
}
