import { RequestFailed } from './types.js';
import { h } from './vdom.js';
export function buildWishDialog(day, quotaRemaining, examples) {
    const onWeekend = day.weekend_status !== 'weekday';
    const onFreeWeekend = day.weekend_status === 'free_weekend';
    const scopes = [
        { scope: 'morning', label: 'Free morning shift', disabled: onFreeWeekend },
        { scope: 'afternoon', label: 'Free afternoon shift', disabled: onFreeWeekend },
        { scope: 'whole_day', label: 'Whole day', disabled: onWeekend },
    ];
    let notice = null;
    if (onFreeWeekend) {
        notice = 'This weekend is already free for you.';
    }
    else if (onWeekend) {
        notice = 'On work weekends you can wish a free morning or afternoon.';
    }
    return {
        date: day.date,
        scopes,
        submittable: !onFreeWeekend && quotaRemaining > 0,
        quotaRemaining,
        examples,
        notice,
    };
}
export async function submitWish(api, month, model, scope) {
    try {
        const wish = await api.submitWish(month, model.date, scope);
        return { ok: true, wishId: wish.wish_id };
    }
    catch (err) {
        if (err instanceof RequestFailed) {
            return {
                ok: false,
                error: err.body.error,
                message: err.body.detail,
                remaining: err.body.remaining,
            };
        }
        throw err;
    }
}
export function renderWishDialog(model, onPick) {
    const children = [
        h('h2', {}, [`Wish for ${model.date}`]),
        h('p', { class: 'quota' }, [`${model.quotaRemaining} wishes remaining this month`]),
    ];
    if (model.notice) {
        children.push(h('p', { class: 'notice' }, [model.notice]));
    }
    children.push(h('div', { class: 'scopes' }, model.scopes.map((option) => h('button', {
        class: 'scope',
        'data-scope': option.scope,
        ...(option.disabled || !model.submittable ? { disabled: 'disabled' } : {}),
    }, [option.label], option.disabled || !model.submittable || !onPick
        ? undefined
        : () => onPick(option.scope)))));
    if (model.examples.length) {
        children.push(h('p', { class: 'examples' }, [
            'Plenty of things are worth a wish: ' + model.examples.join(', ') + '.',
        ]));
    }
    return h('div', { class: 'wish-dialog' }, children);
}
export function renderWishError(result) {
    const lines = [h('p', { class: 'error' }, [result.message ?? ''])];
    if (result.error === 'QuotaExceeded') {
        lines.push(h('p', { class: 'quota' }, [`${result.remaining ?? 0} remaining`]));
    }
    return h('div', { class: 'wish-error', 'data-error': result.error ?? '' }, lines);
}
