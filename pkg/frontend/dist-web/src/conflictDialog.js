import { RequestFailed } from './types.js';
import { h } from './vdom.js';
export function buildConflictDialog(conflict, ownWorkerId) {
    return {
        conflictId: conflict.conflict_id,
        month: conflict.month,
        slotLines: conflict.slots.map((s) => `${s.date} ${s.shift}: short ${s.staff_deficit} staff` +
            (s.certified_deficit ? `, ${s.certified_deficit} certified` : '')),
        colleagues: conflict.colleagues,
        ownWishIds: conflict.wishes
            .filter((w) => w.worker_id === ownWorkerId)
            .map((w) => w.wish_id),
        solutions: conflict.solutions,
        truncated: conflict.truncated,
        escalation: conflict.escalation_required,
    };
}
/** Withdraw one's own wish through the conflict. A 404/409 means the
 * conflict changed under us; refresh instead of failing. */
export async function withdrawOwnWish(api, model, wishId) {
    try {
        const response = await api.withdrawInConflict(model.conflictId, wishId);
        return { ok: true, stale: false, remaining: response.remaining_conflicts };
    }
    catch (err) {
        if (err instanceof RequestFailed && (err.status === 404 || err.status === 409)) {
            const refreshed = await api.myConflicts();
            return { ok: false, stale: true, remaining: refreshed.conflicts };
        }
        throw err;
    }
}
export function renderConflictDialog(model, onWithdraw) {
    const children = [
        h('h2', {}, ['Wish conflict']),
        h('ul', { class: 'slots' }, model.slotLines.map((line) => h('li', {}, [line]))),
        h('p', { class: 'colleagues' }, ['Involved: ' + model.colleagues.join(', ')]),
        h('p', { class: 'talk-first' }, [
            'Maybe talk it over together first; often someone can shift plans.',
        ]),
    ];
    if (model.escalation) {
        children.push(h('p', { class: 'escalation' }, [
            'No combination of withdrawals resolves this; the team needs outside help.',
        ]));
    }
    children.push(h('ol', { class: 'solutions' }, model.solutions.map((solution) => h('li', { 'data-solution': solution.join('+') }, [
        solution.length === 1 ? '1 withdrawal: ' : `${solution.length} withdrawals: `,
        solution.join(', '),
    ]))));
    if (model.truncated) {
        children.push(h('p', { class: 'truncated' }, ['More combinations exist than shown.']));
    }
    for (const wishId of model.ownWishIds) {
        children.push(h('button', { class: 'withdraw', 'data-wish': wishId }, [`Withdraw my wish (${wishId})`], onWithdraw ? () => onWithdraw(wishId) : undefined));
    }
    return h('div', { class: 'conflict-dialog', 'data-conflict': model.conflictId }, children);
}
