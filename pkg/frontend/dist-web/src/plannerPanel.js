import { RequestFailed } from './types.js';
import { h } from './vdom.js';
export function emptyPlannerPanel(month) {
    return {
        month,
        conflicts: [],
        draft: null,
        infeasible: null,
        released: false,
        lastError: null,
    };
}
export async function refreshConflicts(api, model) {
    const mine = await api.myConflicts();
    return { ...model, conflicts: mine.conflicts };
}
export async function runAutofill(api, model, acknowledgeConflicts = false) {
    try {
        const result = await api.autofill(model.month, acknowledgeConflicts);
        if (result.infeasible) {
            return {
                ...model,
                draft: null,
                infeasible: { slot: result.slot, reasons: result.binding_constraints },
                lastError: null,
            };
        }
        return {
            ...model,
            infeasible: null,
            draft: { softPenalty: result.soft_penalty, slots: result.assignment.length },
            lastError: null,
        };
    }
    catch (err) {
        if (err instanceof RequestFailed) {
            return { ...model, lastError: `${err.body.error}: ${err.body.detail}` };
        }
        throw err;
    }
}
export async function releaseMonth(api, model, asOf) {
    try {
        await api.release(model.month, asOf);
        return { ...model, released: true, lastError: null };
    }
    catch (err) {
        if (err instanceof RequestFailed) {
            return { ...model, lastError: `${err.body.error}: ${err.body.detail}` };
        }
        throw err;
    }
}
export function renderPlannerPanel(model, handlers = {}) {
    const children = [
        h('h2', {}, [`Finalize ${model.month}`]),
        h('section', { class: 'all-conflicts' }, model.conflicts.length
            ? model.conflicts.map((c) => h('div', { class: 'conflict-row', 'data-conflict': c.conflict_id }, [
                `${c.slots.length} slot(s), ${c.wishes.length} wishes, ` +
                    `${c.solutions.length} solutions`,
            ]))
            : [h('p', {}, ['No open conflicts.'])]),
        h('button', { class: 'autofill' }, ['Auto-fill'], handlers.onAutofill),
    ];
    if (model.draft) {
        children.push(h('p', { class: 'draft' }, [
            `Draft ready: ${model.draft.slots} slots, soft penalty ${model.draft.softPenalty}`,
        ]), h('button', { class: 'release' }, ['Release'], handlers.onRelease));
    }
    if (model.infeasible) {
        children.push(h('p', { class: 'infeasible' }, [
            `No legal plan: ${model.infeasible.slot ?? 'unknown slot'} — ` +
                model.infeasible.reasons.join('; '),
        ]));
    }
    if (model.released) {
        children.push(h('p', { class: 'released' }, ['Schedule released.']));
    }
    if (model.lastError) {
        children.push(h('p', { class: 'error' }, [model.lastError]));
    }
    return h('div', { class: 'planner-panel' }, children);
}
